#pragma once

#include "heisenberg/identities.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace verify {

/// Identity tags accepted in a run configuration.
const std::vector<std::string>& identity_tags();

struct RunConfig {
  int n = 1;
  std::vector<std::string> identities;
  std::string surface = "sphere(0, 1)";
  std::string domain = "ball_radial(0, 1)";
  std::string testFunction = "rho2_half";
  /// Second function for the Green formulas.
  std::string secondFunction = "x1y1t";
  /// Horizontal vector for c1f and the constant field of gd2; empty means e_1.
  std::vector<double> vector;
  /// gd2 field: constant, normal_perp or tangential_gradient.
  std::string field = "constant";
  /// slab(surface, eps) for foliation and coarea; defaults to the surface
  /// with foliation.epsilon.
  std::optional<std::string> slab;
  heis::QuadratureSpec quadrature;
  /// Spec for the oracle volume of the corollaries; defaults to quadrature.
  std::optional<heis::QuadratureSpec> volumeQuadrature;
  heis::Tolerances tolerances;
  heis::FoliationSpec foliation;
  int points = 100;
  std::uint64_t seed = 1;
  std::string output;  // empty: standard output
  std::string format = "json";

  /// Source line of each key read from a file, for diagnostics.
  std::map<std::string, int> lines;
  int line(const std::string& field) const;
};

class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& field, int line, const std::string& what);
  const std::string& field() const { return field_; }
  int line() const { return line_; }

 private:
  std::string field_;
  int line_;
};

RunConfig load_config(const std::string& path);
RunConfig parse_config(const std::string& yaml_text);
/// Semantic checks shared by files and command-line overrides.
void validate(const RunConfig& cfg);

}  // namespace verify
