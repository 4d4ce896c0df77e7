#include "verify/catalog.hpp"
#include "verify/config.hpp"
#include "verify/report.hpp"
#include "verify/run.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

constexpr int kConfigError = 3;

void print_catalog(const std::string& title, const std::vector<verify::CatalogEntry>& entries) {
  std::cout << title << ":\n";
  std::size_t width = 0;
  for (const auto& e : entries) width = std::max(width, e.signature.size());
  for (const auto& e : entries)
    std::cout << "  " << e.signature << std::string(width + 2 - e.signature.size(), ' ') << e.description << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Heisenberg group identity verifier"};
  app.require_subcommand(1);

  auto* verify_cmd = app.add_subcommand("verify", "run the identities listed in a configuration file");
  std::string config_path;
  std::vector<std::string> identities;
  std::optional<int> n, level;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out, format;
  verify_cmd->add_option("--config", config_path, "YAML run configuration")->required()->check(CLI::ExistingFile);
  verify_cmd->add_option("--identity", identities, "identity tag; repeat to select several (replaces the file list)")
      ->check(CLI::IsMember(verify::identity_tags()));
  verify_cmd->add_option("--n", n, "dimension parameter of H^n");
  verify_cmd->add_option("--out", out, "report path; standard output when empty");
  verify_cmd->add_option("--format", format, "report format")->check(CLI::IsMember({"json", "csv", "text"}));
  verify_cmd->add_option("--seed", seed, "seed for sampled points and Monte Carlo rules");
  verify_cmd->add_option("--level", level, "number of refinement levels");

  auto* list_cmd = app.add_subcommand("list-catalog", "print the field, surface, domain and slab catalogs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }

  if (list_cmd->parsed()) {
    print_catalog("fields", verify::field_catalog());
    std::cout << "  or a polynomial in x1..xn, y1..yn, t, e.g. \"x1^2 - 0.5*y1*t\"\n\n";
    print_catalog("surfaces", verify::surface_catalog());
    std::cout << '\n';
    print_catalog("domains", verify::domain_catalog());
    std::cout << '\n';
    print_catalog("slabs", verify::slab_catalog());
    return 0;
  }

  try {
    verify::RunConfig cfg = verify::load_config(config_path);
    if (!identities.empty()) cfg.identities = identities;
    if (n) cfg.n = *n;
    if (out) cfg.output = *out;
    if (format) cfg.format = *format;
    if (seed) cfg.seed = cfg.quadrature.seed = *seed;
    if (level) cfg.quadrature.levels = *level;

    const auto result = verify::run(cfg);
    verify::write_report(result.reports, cfg.format, cfg.output);
    return result.exitCode;
  } catch (const verify::ConfigError& e) {
    std::cerr << "heis: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "heis: " << e.what() << '\n';
    return kConfigError;
  }
}
