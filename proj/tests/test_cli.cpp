#include <doctest.h>

#include "verify/catalog.hpp"
#include "verify/config.hpp"
#include "verify/report.hpp"
#include "verify/run.hpp"

#include <sstream>

using namespace verify;

namespace {

std::string emit(const std::vector<heis::IdentityReport>& reps, const std::string& format) {
  std::ostringstream out;
  emit_report(reps, format, out);
  return out.str();
}

heis::IdentityReport sample_report() {
  heis::IntegralResult r;
  r.value = 0.5;
  r.errorEstimate = 1e-12;
  r.cauchy = true;
  r.refinementTrail = {{0, 0.5000001}, {1, 0.5}};
  return heis::make_report("sample", heis::Side::of("area", r), heis::Side::exact(0.5), 1e-3, {{"surface", "s"}});
}

}  // namespace

TEST_CASE("call syntax") {
  auto c = parse_call("slab(sphere(0, 1), 0.05)");
  CHECK(c.name == "slab");
  REQUIRE(c.args.size() == 2);
  CHECK(c.args[0] == "sphere(0, 1)");
  CHECK(c.args[1] == "0.05");
  CHECK(parse_call("two_t").args.empty());
  CHECK_THROWS_AS(parse_call("sphere(0, 1"), CatalogError);
}

TEST_CASE("catalog lookups") {
  CHECK(make_field("rho2_half", 2).n() == 2);
  CHECK(make_surface("sphere(0, 1)", 1).closed());
  CHECK_NOTHROW(make_domain("ball_radial(0, 1)", 1));
  CHECK_NOTHROW(make_field("x1^2 - 0.5*y1*t", 1));

  try {
    make_field("rho_half", 1);
    FAIL("expected a catalog error");
  } catch (const CatalogError& e) {
    const std::string what = e.what();
    CHECK(what.find("available") != std::string::npos);
    CHECK(what.find("rho2_half") != std::string::npos);
  }
  CHECK_THROWS_AS(make_surface("sphere(0)", 1), CatalogError);  // arity
  CHECK_THROWS_AS(make_surface("torus(2, 1)", 2), CatalogError);
  CHECK_THROWS_AS(make_domain("cube(1)", 1), CatalogError);
}

TEST_CASE("config parsing") {
  const auto cfg = parse_config(R"(n: 2
identities: [pointwise, c3f]
surface: sphere(0, 1)
seed: 7
quadrature:
  orders: [12, 14]
  levels: 3
tolerances:
  integral: 0.002
  c3f: 0.01
)");
  CHECK(cfg.n == 2);
  CHECK(cfg.identities == std::vector<std::string>{"pointwise", "c3f"});
  CHECK(cfg.quadrature.orders == std::vector<int>{12, 14});
  CHECK(cfg.quadrature.levels == 3);
  CHECK(cfg.quadrature.seed == 7);
  CHECK(cfg.tolerances.integral == 0.002);
  CHECK(cfg.tolerances.get("c3f", 1.0) == 0.01);
  CHECK(cfg.line("quadrature.levels") == 7);
}

TEST_CASE("config diagnostics name the field and line") {
  const auto expect = [](const std::string& text, const std::string& field, int line) {
    try {
      parse_config(text);
      FAIL("expected a config error for " << field);
    } catch (const ConfigError& e) {
      CHECK(e.field() == field);
      CHECK(e.line() == line);
      CHECK(std::string(e.what()).find(field) != std::string::npos);
    }
  };
  expect("n: 1\nidentities: [reily]\n", "identities", 2);
  expect("n: 1\nquadrature:\n  levles: 2\n", "quadrature.levles", 3);
  expect("n: 0\n", "n", 1);
  expect("n: 1\nformat: xml\n", "format", 2);
  expect("n: 1\ntolerances:\n  reilly: -1\n", "tolerances.reilly", 3);
}

TEST_CASE("run: empty list and catalog misses") {
  auto cfg = parse_config("n: 1\nidentities: []\n");
  auto res = run(cfg);
  CHECK(res.reports.empty());
  CHECK(res.exitCode == 0);

  cfg = parse_config("n: 1\nidentities: [pointwise]\ntestFunction: rho_half\n");
  try {
    run(cfg);
    FAIL("expected a config error");
  } catch (const ConfigError& e) {
    CHECK(e.field() == "testFunction");
    CHECK(e.line() == 3);
  }
}

TEST_CASE("run: pointwise battery from a config") {
  const auto cfg = parse_config("n: 1\nidentities: [pointwise]\ntestFunction: rho2_half\npoints: 50\n");
  const auto res = run(cfg);
  REQUIRE(res.reports.size() == 1);
  CHECK(res.reports[0].pass());
  CHECK(res.reports[0].lhs.value <= 1e-8);
  CHECK(res.exitCode == 0);
}

TEST_CASE("run: identity stage failures become reports") {
  // c4f needs n > 1
  const auto cfg = parse_config("n: 1\nidentities: [c4f]\n");
  const auto res = run(cfg);
  REQUIRE(res.reports.size() == 1);
  CHECK(res.reports[0].verdict == heis::Verdict::fail);
  REQUIRE_FALSE(res.reports[0].notes.empty());
  CHECK(res.reports[0].notes[0].rfind("stage c4f:", 0) == 0);
  CHECK(res.exitCode == 1);
}

TEST_CASE("exit codes") {
  auto ok = sample_report();
  auto inc = ok;
  inc.verdict = heis::Verdict::inconclusive;
  auto bad = ok;
  bad.verdict = heis::Verdict::fail;
  CHECK(exit_code({}) == 0);
  CHECK(exit_code({ok}) == 0);
  CHECK(exit_code({ok, inc}) == 2);
  CHECK(exit_code({inc, bad}) == 1);
}

TEST_CASE("report formats") {
  const auto r = sample_report();
  CHECK(format_number(0.1) == "0.10000000000000001");
  CHECK(format_number(std::nan("")) == "nan");

  const auto json = nlohmann::json::parse(emit({r}, "json"));
  CHECK(json["reports"].size() == 1);
  CHECK(json["reports"][0]["name"] == "sample");
  CHECK(json["reports"][0]["verdict"] == "pass");
  CHECK(json["summary"]["exitCode"] == 0);
  for (const char* key : {"name", "verdict", "inputs", "lhs", "rhs", "residual", "relResidual", "tolerance"})
    CHECK(json["reports"][0].contains(key));

  const auto csv = emit({r}, "csv");
  CHECK(csv.find("# sample lhs area\nlevel,value,delta\n") != std::string::npos);
  CHECK(csv.find("0,0.50000009999999995,0\n") != std::string::npos);

  // columns line up: "lhs" sits at the same offset in the header and the row
  const auto text = emit({r}, "text");
  const auto header_end = text.find('\n');
  const std::string header = text.substr(0, header_end);
  const std::string row = text.substr(header_end + 1, text.find('\n', header_end + 1) - header_end - 1);
  const auto col = header.find("lhs");
  CHECK(row.substr(col, 3) == "0.5");
  CHECK(header.find("rhs") == row.find("0.5", col + 3));

  CHECK(emit({r}, "json") == emit({r}, "json"));
  CHECK_THROWS_AS(emit({r}, "xml"), std::invalid_argument);
}

TEST_CASE("json floats carry 17 significant digits") {
  const auto text = emit({sample_report()}, "json");
  CHECK(text.find("\"value\": 0.50000009999999995") != std::string::npos);
  CHECK(text.find("\"tolerance\": 0.001") != std::string::npos);
  CHECK(text.find("0.0010000000000000000") == std::string::npos);
  CHECK(nlohmann::ordered_json::parse(text).dump(2).size() > 0);
}
