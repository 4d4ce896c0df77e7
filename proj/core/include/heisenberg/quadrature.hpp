#pragma once

#include "heisenberg/surface.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace heis {

struct GaussRule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};
/// Gauss-Legendre rule with `order` nodes; cached, safe to call concurrently.
const GaussRule& gauss_legendre(int order);

/// Sum in a fixed binary tree; the result depends only on the input order.
double pairwise_sum(std::span<const double> v);

/// Runs body(i) for i in [0, count) on a fixed pool of threads. Outputs must
/// be written to per-index slots; the caller reduces them afterwards.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);
int worker_threads();
void set_worker_threads(int threads);

struct ParamBox {
  Eigen::VectorXd lo;
  Eigen::VectorXd hi;

  int dim() const { return static_cast<int>(lo.size()); }
  double volume() const { return (hi - lo).prod(); }
};

/// Parameter-space neighbourhood of characteristic points. An edge exclusion
/// removes a strip of width delta along one face of the box; a ball exclusion
/// removes the points within delta of a centre.
struct Exclusion {
  enum class Kind { edge, ball };
  Kind kind = Kind::edge;
  int axis = 0;
  bool upper = false;
  Eigen::VectorXd center;
};

class SurfaceChart {
 public:
  /// Parameter vector -> coordinate jets of order 1 in the parameters.
  using Map = std::function<std::vector<Jet>(const Eigen::VectorXd& u)>;

  SurfaceChart() = default;
  SurfaceChart(std::string label, ImplicitSurface surface, ParamBox box, Map map, bool closed = true);

  const std::string& label() const { return label_; }
  const ImplicitSurface& surface() const { return surface_; }
  const ParamBox& box() const { return box_; }
  bool closed() const { return closed_; }
  int n() const { return surface_.n(); }

  const std::vector<Exclusion>& exclusions() const { return exclusions_; }
  SurfaceChart& add_exclusion(Exclusion e) {
    exclusions_.push_back(std::move(e));
    return *this;
  }
  SurfaceChart& set_exclusions(std::vector<Exclusion> e) {
    exclusions_ = std::move(e);
    return *this;
  }
  /// Per-axis multiplier applied to the quadrature order (e.g. 2 for azimuths).
  const std::vector<int>& axis_weight() const { return axis_weight_; }
  SurfaceChart& set_axis_weight(std::vector<int> w) {
    axis_weight_ = std::move(w);
    return *this;
  }

  Point point(const Eigen::VectorXd& u) const;
  /// Riemannian area element sqrt(det(J^T G J)) for the left-invariant metric.
  double area_element(const Eigen::VectorXd& u) const;
  struct Sample {
    Point p;
    double area = 0.0;
  };
  Sample sample(const Eigen::VectorXd& u) const;

 private:
  std::string label_;
  ImplicitSurface surface_;
  ParamBox box_;
  Map map_;
  bool closed_ = true;
  std::vector<Exclusion> exclusions_;
  std::vector<int> axis_weight_;
};

class DomainChart {
 public:
  /// Unit-box parameters -> coordinate jets of order 1.
  using Map = std::function<std::vector<Jet>(const Eigen::VectorXd& w)>;

  DomainChart() = default;
  DomainChart(std::string label, int n, Map map);

  const std::string& label() const { return label_; }
  int n() const { return n_; }
  const std::vector<int>& axis_weight() const { return axis_weight_; }
  DomainChart& set_axis_weight(std::vector<int> w) {
    axis_weight_ = std::move(w);
    return *this;
  }

  Point point(const Eigen::VectorXd& w) const;
  double jacobian_det(const Eigen::VectorXd& w) const;
  struct Sample {
    Point p;
    double det = 0.0;
  };
  Sample sample(const Eigen::VectorXd& w) const;
  /// The chart of L_q(D).
  DomainChart translated(const Point& q) const;

 private:
  std::string label_;
  int n_ = 0;
  Map map_;
  std::vector<int> axis_weight_;
};

enum class Measure { riemannian, h_perimeter };
enum class Rule { gauss_legendre, monte_carlo };

struct CapRadii {
  double delta0 = 0.2;
  double ratio = 0.5;
  int count = 6;
  std::vector<double> radii() const;
};

struct QuadratureSpec {
  Rule rule = Rule::gauss_legendre;
  /// Per-axis Gauss order at level 0; a single entry applies to all axes.
  std::vector<int> orders{32};
  /// Number of levels; level k uses orders * 2^k.
  int levels = 2;
  std::int64_t samples = 1 << 16;
  std::uint64_t seed = 1;
  CapRadii caps;
  double charTol = 1e-8;
  /// Two-level differences below this (relative to max(1, |value|)) count as converged.
  double cauchyFloor = 1e-11;

  int order(int axis, int level, const std::vector<int>& axis_weight) const;
};

struct ExcisionTrail {
  std::vector<std::pair<double, double>> points;  // (delta, value)
  double limit = 0.0;
  double power = 0.0;
  double coefficient = 0.0;
  double fitResidual = 0.0;
  double spread = 0.0;
  bool flagged = false;    // fit residual above 10% of the spread
  bool converged = false;  // power > 0 and not flagged
  /// Full-chart value with no cap removed, when the nodes allow it.
  std::optional<double> direct;
};

struct IntegralResult {
  double value = 0.0;
  std::vector<std::pair<int, double>> refinementTrail;
  double errorEstimate = 0.0;
  bool cauchy = false;
  std::optional<ExcisionTrail> excision;
};

/// Several integrands evaluated on the same nodes.
using SurfaceIntegrand = std::function<void(const SurfaceGeometry&, std::span<double>)>;
using DomainIntegrand = std::function<void(const Point&, std::span<double>)>;

/// Integrals over the chart with caps of radius `delta` removed.
std::vector<IntegralResult> surface_integrals(const SurfaceChart& chart, const SurfaceIntegrand& f,
                                              int count, Measure measure, const QuadratureSpec& spec,
                                              double delta = 0.0);
IntegralResult surface_integral(const SurfaceChart& chart,
                                const std::function<double(const SurfaceGeometry&)>& f,
                                Measure measure, const QuadratureSpec& spec, double delta = 0.0);

/// Integrals for each cap radius, extrapolated to zero radius by a power law.
std::vector<IntegralResult> excised_surface_integrals(const SurfaceChart& chart,
                                                      const SurfaceIntegrand& f, int count,
                                                      Measure measure, const QuadratureSpec& spec);
IntegralResult excised_surface_integral(const SurfaceChart& chart,
                                        const std::function<double(const SurfaceGeometry&)>& f,
                                        Measure measure, const QuadratureSpec& spec);

std::vector<IntegralResult> domain_integrals(const DomainChart& chart, const DomainIntegrand& f,
                                             int count, const QuadratureSpec& spec);
IntegralResult domain_integral(const DomainChart& chart, const std::function<double(const Point&)>& f,
                               const QuadratureSpec& spec);

/// Results from per-level values, one row per level and one column per integrand.
std::vector<IntegralResult> results_from_levels(const std::vector<std::vector<double>>& per_level, int count,
                                                double floor);

/// Least-squares fit of value(delta) = L + c * delta^alpha. When the values
/// at the smallest radii agree to within `noise` the trail counts as flat.
ExcisionTrail fit_power_law(std::vector<std::pair<double, double>> points, double noise = 0.0);

/// Cauchy test on a refinement trail.
bool is_cauchy(const std::vector<std::pair<int, double>>& trail, double floor);

/// Flagged parameter cells (i, j, ...) in row-major order of a uniform grid.
std::vector<std::vector<int>> char_scan(const SurfaceChart& chart, const std::vector<int>& grid,
                                        double charTol = 1e-8);
/// Turns flagged cells into exclusions: cells on a box face become edge
/// strips, interior cells become balls around the cell centre.
std::vector<Exclusion> exclusions_from_scan(const SurfaceChart& chart, const std::vector<int>& grid,
                                            const std::vector<std::vector<int>>& cells);

}  // namespace heis
