#pragma once

#include "heisenberg/group.hpp"
#include "heisenberg/jet.hpp"

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace heis {

/// A smooth scalar field on H^n that can report its Taylor data at any point.
///
/// Fields built from an expression evaluate the expression directly on jets,
/// which makes them exact for polynomials and composable with any chart map.
/// Derived fields (for example a normalized defining function) only know how
/// to produce their jet in coordinate variables; composition then goes
/// through the polynomial substitution in `compose`.
class ScalarField {
 public:
  using Expression = std::function<Jet(std::span<const Jet> coords)>;
  using JetFunction = std::function<Jet(const Point& p, int order)>;

  ScalarField() = default;
  ScalarField(std::string label, int n, JetFunction jet);
  static ScalarField from_expression(std::string label, int n, Expression expr);

  const std::string& label() const { return label_; }
  int n() const { return n_; }
  int max_order() const { return max_order_; }
  ScalarField& with_max_order(int order) {
    max_order_ = order;
    return *this;
  }

  /// Jet in the coordinate variables (x_1, y_1, ..., t) based at p.
  Jet jet(const Point& p, int order) const;
  double value(const Point& p) const { return jet(p, 0).value(); }
  /// Evaluates the field on coordinate jets living in any variable set.
  Jet compose(std::span<const Jet> coords) const;

 private:
  std::string label_;
  int n_ = 0;
  int max_order_ = kMaxJetOrder;
  Expression expr_;
  JetFunction jet_;
};

/// Coordinate jets (x_1, y_1, ..., x_n, y_n, t) based at p.
std::vector<Jet> coordinate_jets(const Point& p, int order);

/// Public entry point for Taylor data; accepts orders 1 to 3.
Jet jet_eval(const ScalarField& field, const Point& p, int order);

ScalarField scale(const ScalarField& f, double s);

/// A polynomial in x_i, y_i, t given as text, e.g. "x1^2 - 0.5*x1*y1*t + 2".
/// Accepts x, y as aliases of x1, y1.
ScalarField parse_polynomial(const std::string& text, int n);

class PolynomialParseError : public std::invalid_argument {
 public:
  PolynomialParseError(const std::string& text, std::size_t pos, const std::string& why);
  std::size_t position() const { return pos_; }

 private:
  std::size_t pos_;
};

namespace fields {

ScalarField coordinate(int n, int k);
ScalarField rho2_half(int n);
ScalarField two_t(int n);
ScalarField linear_horizontal(const Eigen::VectorXd& V);
/// |p - c|^2 - r^2 with Euclidean norm in exponential coordinates.
ScalarField euclidean_sphere(const Eigen::VectorXd& center, double r);
/// sum x_i^2/a^2 + y_i^2/b^2 + t^2/c^2 - 1.
ScalarField ellipsoid(int n, double a, double b, double c);
/// (|z| - R)^2 + t^2 - r^2.
ScalarField torus(int n, double R, double r);
/// |z|^2 - r^2.
ScalarField vertical_cylinder(int n, double r);
/// |z| - r; its horizontal gradient has unit length everywhere off the t-axis.
ScalarField cylinder_distance(int n, double r);
ScalarField x1_squared(int n);
ScalarField x1y1t(int n);
ScalarField exp_cos(int n);
ScalarField constant(int n, double c);

}  // namespace fields
}  // namespace heis
