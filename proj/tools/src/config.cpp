#include "verify/config.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

namespace verify {

const std::vector<std::string>& identity_tags() {
  static const std::vector<std::string> tags{"pointwise", "reilly", "gd2", "green", "mio", "c0f",     "c1f",
                                             "c2f",       "c3f",    "c4f", "foliation", "coarea"};
  return tags;
}

ConfigError::ConfigError(const std::string& field, int line, const std::string& what)
    : std::runtime_error((line > 0 ? "config line " + std::to_string(line) + ": " : std::string("config: ")) +
                         (field.empty() ? "" : "field '" + field + "': ") + what),
      field_(field),
      line_(line) {}

namespace {

int line_of(const YAML::Node& node) { return node.Mark().line >= 0 ? node.Mark().line + 1 : 0; }

template <class T>
T get(const YAML::Node& node, const std::string& field) {
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    throw ConfigError(field, line_of(node), "cannot read value '" + YAML::Dump(node) + "'");
  }
}

void check_keys(const YAML::Node& map, const std::string& prefix, const std::set<std::string>& known,
                std::map<std::string, int>& lines) {
  if (!map.IsMap()) throw ConfigError(prefix, line_of(map), "expected a mapping");
  for (const auto& kv : map) {
    const auto key = kv.first.as<std::string>();
    lines[prefix.empty() ? key : prefix + "." + key] = line_of(kv.first);
    if (!known.count(key)) {
      std::string list;
      for (const auto& k : known) list += (list.empty() ? "" : ", ") + k;
      throw ConfigError(prefix.empty() ? key : prefix + "." + key, line_of(kv.first),
                        "unknown key; expected one of " + list);
    }
  }
}

std::vector<int> int_list(const YAML::Node& node, const std::string& field) {
  if (node.IsScalar()) return {get<int>(node, field)};
  if (!node.IsSequence()) throw ConfigError(field, line_of(node), "expected an integer or a list of integers");
  std::vector<int> out;
  for (const auto& x : node) out.push_back(get<int>(x, field));
  return out;
}

heis::QuadratureSpec read_quadrature(const YAML::Node& q, const std::string& prefix, heis::QuadratureSpec spec,
                                     std::map<std::string, int>& lines) {
  check_keys(q, prefix, {"rule", "orders", "levels", "samples", "caps", "charTol", "cauchyFloor"}, lines);
  if (q["rule"]) {
    const auto r = get<std::string>(q["rule"], prefix + ".rule");
    if (r == "gauss_legendre")
      spec.rule = heis::Rule::gauss_legendre;
    else if (r == "monte_carlo")
      spec.rule = heis::Rule::monte_carlo;
    else
      throw ConfigError(prefix + ".rule", line_of(q["rule"]), "expected gauss_legendre or monte_carlo");
  }
  if (q["orders"]) spec.orders = int_list(q["orders"], prefix + ".orders");
  if (q["levels"]) spec.levels = get<int>(q["levels"], prefix + ".levels");
  if (q["samples"]) spec.samples = get<std::int64_t>(q["samples"], prefix + ".samples");
  if (q["charTol"]) spec.charTol = get<double>(q["charTol"], prefix + ".charTol");
  if (q["cauchyFloor"]) spec.cauchyFloor = get<double>(q["cauchyFloor"], prefix + ".cauchyFloor");
  if (const auto caps = q["caps"]) {
    check_keys(caps, prefix + ".caps", {"delta0", "ratio", "count"}, lines);
    if (caps["delta0"]) spec.caps.delta0 = get<double>(caps["delta0"], prefix + ".caps.delta0");
    if (caps["ratio"]) spec.caps.ratio = get<double>(caps["ratio"], prefix + ".caps.ratio");
    if (caps["count"]) spec.caps.count = get<int>(caps["count"], prefix + ".caps.count");
  }
  return spec;
}

void check_spec(const RunConfig& cfg, const heis::QuadratureSpec& q, const std::string& prefix) {
  const auto fail = [&](const std::string& key, const std::string& what) {
    throw ConfigError(prefix + "." + key, cfg.line(prefix + "." + key), what);
  };
  if (q.orders.empty() || std::any_of(q.orders.begin(), q.orders.end(), [](int o) { return o < 1; }))
    fail("orders", "orders must be positive");
  if (q.levels < 1 || q.levels > 6) fail("levels", "levels must be between 1 and 6");
  if (q.samples < 1) fail("samples", "samples must be positive");
  if (!(q.caps.delta0 > 0) || !(q.caps.ratio > 0 && q.caps.ratio < 1) || q.caps.count < 1)
    fail("caps", "need delta0 > 0, 0 < ratio < 1 and count >= 1");
}

RunConfig from_node(const YAML::Node& root) {
  RunConfig cfg;
  if (!root || root.IsNull()) return cfg;
  check_keys(root, "",
             {"n", "identities", "surface", "domain", "testFunction", "secondFunction", "vector", "field", "slab",
              "quadrature", "volumeQuadrature", "tolerances", "foliation", "points", "seed", "output", "format"},
             cfg.lines);
  if (root["n"]) cfg.n = get<int>(root["n"], "n");
  if (const auto ids = root["identities"]) {
    if (!ids.IsSequence() && !ids.IsNull()) throw ConfigError("identities", line_of(ids), "expected a list of tags");
    for (const auto& x : ids) {
      const auto tag = get<std::string>(x, "identities");
      const auto& tags = identity_tags();
      if (std::find(tags.begin(), tags.end(), tag) == tags.end()) {
        std::string list;
        for (const auto& t : tags) list += (list.empty() ? "" : ", ") + t;
        throw ConfigError("identities", line_of(x), "unknown identity '" + tag + "'; expected one of " + list);
      }
      cfg.identities.push_back(tag);
    }
  }
  if (root["surface"]) cfg.surface = get<std::string>(root["surface"], "surface");
  if (root["domain"]) cfg.domain = get<std::string>(root["domain"], "domain");
  if (root["testFunction"]) cfg.testFunction = get<std::string>(root["testFunction"], "testFunction");
  if (root["secondFunction"]) cfg.secondFunction = get<std::string>(root["secondFunction"], "secondFunction");
  if (const auto v = root["vector"]) {
    if (!v.IsSequence()) throw ConfigError("vector", line_of(v), "expected a list of numbers");
    for (const auto& x : v) cfg.vector.push_back(get<double>(x, "vector"));
  }
  if (root["field"]) cfg.field = get<std::string>(root["field"], "field");
  if (root["slab"]) cfg.slab = get<std::string>(root["slab"], "slab");
  if (root["quadrature"]) cfg.quadrature = read_quadrature(root["quadrature"], "quadrature", cfg.quadrature, cfg.lines);
  if (root["volumeQuadrature"])
    cfg.volumeQuadrature = read_quadrature(root["volumeQuadrature"], "volumeQuadrature", cfg.quadrature, cfg.lines);
  if (const auto t = root["tolerances"]) {
    if (!t.IsMap()) throw ConfigError("tolerances", line_of(t), "expected a mapping");
    for (const auto& kv : t) {
      const auto key = kv.first.as<std::string>();
      const double v = get<double>(kv.second, "tolerances." + key);
      if (!(v > 0)) throw ConfigError("tolerances." + key, line_of(kv.second), "must be positive");
      if (key == "pointwise")
        cfg.tolerances.pointwise = v;
      else if (key == "integral")
        cfg.tolerances.integral = v;
      else if (key == "foliation")
        cfg.tolerances.foliation = v;
      else
        cfg.tolerances.overrides[key] = v;
    }
  }
  if (const auto f = root["foliation"]) {
    check_keys(f, "foliation", {"epsilon", "slices", "eikonalTol"}, cfg.lines);
    if (f["epsilon"]) cfg.foliation.epsilon = get<double>(f["epsilon"], "foliation.epsilon");
    if (f["slices"]) cfg.foliation.slices = get<int>(f["slices"], "foliation.slices");
    if (f["eikonalTol"]) cfg.foliation.eikonalTol = get<double>(f["eikonalTol"], "foliation.eikonalTol");
  }
  if (root["points"]) cfg.points = get<int>(root["points"], "points");
  if (root["seed"]) cfg.seed = get<std::uint64_t>(root["seed"], "seed");
  if (root["output"]) cfg.output = get<std::string>(root["output"], "output");
  if (root["format"]) cfg.format = get<std::string>(root["format"], "format");
  cfg.quadrature.seed = cfg.seed;
  if (cfg.volumeQuadrature) cfg.volumeQuadrature->seed = cfg.seed;
  return cfg;
}

RunConfig parse_node(const std::function<YAML::Node()>& load) {
  YAML::Node root;
  try {
    root = load();
  } catch (const YAML::ParserException& e) {
    throw ConfigError("", e.mark.line + 1, e.msg);
  } catch (const YAML::BadFile&) {
    throw ConfigError("", 0, "cannot open the configuration file");
  }
  RunConfig cfg = from_node(root);
  validate(cfg);
  return cfg;
}

}  // namespace

int RunConfig::line(const std::string& field) const {
  const auto it = lines.find(field);
  return it == lines.end() ? 0 : it->second;
}

void validate(const RunConfig& cfg) {
  const auto fail = [&](const std::string& field, const std::string& what) {
    throw ConfigError(field, cfg.line(field), what);
  };
  if (cfg.n < 1) fail("n", "must be at least 1");
  if (cfg.format != "json" && cfg.format != "csv" && cfg.format != "text") fail("format", "expected json, csv or text");
  if (!cfg.vector.empty() && static_cast<int>(cfg.vector.size()) != 2 * cfg.n)
    fail("vector", "needs 2n = " + std::to_string(2 * cfg.n) + " components");
  if (cfg.field != "constant" && cfg.field != "normal_perp" && cfg.field != "tangential_gradient")
    fail("field", "expected constant, normal_perp or tangential_gradient");
  if (cfg.points < 1) fail("points", "must be positive");
  if (!(cfg.foliation.epsilon > 0)) fail("foliation.epsilon", "must be positive");
  if (cfg.foliation.slices < 1) fail("foliation.slices", "must be positive");
  check_spec(cfg, cfg.quadrature, "quadrature");
  if (cfg.volumeQuadrature) check_spec(cfg, *cfg.volumeQuadrature, "volumeQuadrature");
}

RunConfig load_config(const std::string& path) {
  return parse_node([&] { return YAML::LoadFile(path); });
}

RunConfig parse_config(const std::string& yaml_text) {
  return parse_node([&] { return YAML::Load(yaml_text); });
}

}  // namespace verify
