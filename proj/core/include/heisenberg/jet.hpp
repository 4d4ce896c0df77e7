#pragma once

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace heis {

constexpr int kMaxJetOrder = 3;
constexpr int kMaxJetDim = 16;

class UnsupportedOrder : public std::invalid_argument {
 public:
  explicit UnsupportedOrder(int order);
};

/// Monomial bookkeeping for truncated polynomials in `dim` variables up to
/// kMaxJetOrder. Monomials are graded by degree, so the table for a lower
/// order is a prefix of the table for a higher one.
class MonomialLayout {
 public:
  static const MonomialLayout& get(int dim);

  int dim() const { return dim_; }
  int size(int order) const { return count_[order]; }
  int degree(int idx) const { return degree_[idx]; }
  std::span<const std::uint8_t> exponents(int idx) const {
    return {exps_.data() + static_cast<std::size_t>(idx) * dim_, static_cast<std::size_t>(dim_)};
  }
  /// Index of m + e_k, or -1 past the maximal order.
  int raise(int idx, int k) const { return raise_[idx * dim_ + k]; }
  /// Index of m - e_k, or -1 when m_k == 0.
  int lower(int idx, int k) const { return lower_[idx * dim_ + k]; }
  int index_of(std::span<const int> exps) const;

  struct Product {
    int a, b, c;
  };
  /// Products (a, b) -> c with deg(c) <= order.
  std::span<const Product> products(int order) const {
    return {products_.data(), static_cast<std::size_t>(product_count_[order])};
  }

 private:
  explicit MonomialLayout(int dim);

  int dim_;
  std::array<int, kMaxJetOrder + 1> count_{};
  std::vector<std::uint8_t> exps_;
  std::vector<int> degree_;
  std::vector<int> raise_;
  std::vector<int> lower_;
  std::vector<Product> products_;
  std::array<int, kMaxJetOrder + 1> product_count_{};
};

/// Truncated Taylor expansion of a scalar quantity in `dim` variables around
/// a base point: sum over |m| <= order of coefficient_m * h^m. Coefficients
/// are Taylor coefficients, so partial derivatives are coefficient * m!.
class Jet {
 public:
  Jet() = default;
  Jet(int dim, int order);

  static Jet constant(int dim, int order, double value);
  /// The jet of the coordinate function u_k with base value `value`.
  static Jet variable(int dim, int order, int k, double value);

  int dim() const { return layout_ ? layout_->dim() : 0; }
  int order() const { return order_; }
  int size() const { return static_cast<int>(c_.size()); }
  const MonomialLayout& layout() const { return *layout_; }
  bool empty() const { return layout_ == nullptr; }

  double value() const { return c_[0]; }
  double coeff(int idx) const { return c_[idx]; }
  double& coeff(int idx) { return c_[idx]; }
  std::span<const double> coefficients() const { return c_; }

  /// Euclidean partial derivative for the multi-index `m` (length dim).
  double partial(std::span<const int> m) const;
  double d(int k) const;
  double d(int k, int l) const;
  double d(int k, int l, int m) const;
  Eigen::VectorXd gradient() const;
  Eigen::MatrixXd hessian() const;

  /// d/du_k; the result has order - 1.
  Jet derivative(int k) const;
  Jet truncated(int order) const;
  /// Same jet with constant term replaced by zero.
  Jet displacement() const;

  Jet& operator+=(const Jet& o);
  Jet& operator-=(const Jet& o);
  Jet& operator*=(double s);
  Jet& operator+=(double s) {
    c_[0] += s;
    return *this;
  }

  friend Jet operator+(Jet a, const Jet& b);
  friend Jet operator-(Jet a, const Jet& b);
  friend Jet operator*(const Jet& a, const Jet& b);
  friend Jet operator/(const Jet& a, const Jet& b);
  friend Jet operator-(Jet a);
  friend Jet operator+(Jet a, double s) { return a += s; }
  friend Jet operator+(double s, Jet a) { return a += s; }
  friend Jet operator-(Jet a, double s) { return a += -s; }
  friend Jet operator-(double s, Jet a);
  friend Jet operator*(Jet a, double s) { return a *= s; }
  friend Jet operator*(double s, Jet a) { return a *= s; }
  friend Jet operator/(Jet a, double s) { return a *= 1.0 / s; }
  friend Jet operator/(double s, const Jet& a);

  /// Applies a univariate function given its derivatives f(a0), f'(a0), ...
  Jet apply(std::span<const double> derivs) const;

  /// Multiplies by (c0 + c1 * u_k) keeping the current order.
  Jet times_affine(double c0, int k, double c1) const;

 private:
  Jet(const MonomialLayout* layout, int order);
  void align(const Jet& o);

  const MonomialLayout* layout_ = nullptr;
  int order_ = 0;
  std::vector<double> c_;
};

Jet sqrt(const Jet& a);
Jet exp(const Jet& a);
Jet log(const Jet& a);
Jet sin(const Jet& a);
Jet cos(const Jet& a);
Jet pow(const Jet& a, int e);
Jet square(const Jet& a);

/// Evaluates the polynomial `outer` (a jet in outer.dim() variables) at the
/// displacements `inner` (jets without constant term, sharing one layout).
/// The result order is min(outer.order(), inner order).
Jet compose(const Jet& outer, std::span<const Jet> inner);

}  // namespace heis
