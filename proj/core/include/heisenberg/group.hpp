#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace heis {

/// Error raised when two objects built for different H^n are combined.
class DimensionMismatch : public std::invalid_argument {
 public:
  explicit DimensionMismatch(const std::string& what) : std::invalid_argument(what) {}
};

/// A point of H^n in exponential coordinates, z = (x_1, y_1, ..., x_n, y_n).
struct Point {
  Eigen::VectorXd z;
  double t = 0.0;

  Point() = default;
  Point(Eigen::VectorXd z_, double t_);
  /// Builds a point from a (2n+1)-vector laid out as (x_1, y_1, ..., x_n, y_n, t).
  static Point from_coords(const Eigen::VectorXd& coords);
  static Point origin(int n);

  int n() const { return static_cast<int>(z.size()) / 2; }
  int dim() const { return static_cast<int>(z.size()) + 1; }
  Eigen::VectorXd coords() const;
  bool is_finite() const;
};

/// Frame components along X_1, Y_1, ..., X_n, Y_n.
class HorVec {
 public:
  HorVec() = default;
  explicit HorVec(Eigen::VectorXd c);
  static HorVec zero(int n) { return HorVec(Eigen::VectorXd::Zero(2 * n)); }

  int n() const { return static_cast<int>(c_.size()) / 2; }
  const Eigen::VectorXd& components() const { return c_; }
  double operator[](int i) const { return c_[i]; }
  double dot(const HorVec& o) const;
  double norm() const { return c_.norm(); }

 private:
  Eigen::VectorXd c_;
};

/// Frame components along X_1, Y_1, ..., X_n, Y_n, T.
class FullVec {
 public:
  FullVec() = default;
  explicit FullVec(Eigen::VectorXd c);

  int n() const { return (static_cast<int>(c_.size()) - 1) / 2; }
  const Eigen::VectorXd& components() const { return c_; }
  double operator[](int i) const { return c_[i]; }
  HorVec horizontal() const { return HorVec(c_.head(c_.size() - 1)); }
  double vertical() const { return c_[c_.size() - 1]; }

 private:
  Eigen::VectorXd c_;
};

/// The structural constants of h_n: block diagonal with [[0,1],[-1,0]] blocks.
class StructuralMatrix {
 public:
  explicit StructuralMatrix(int n);

  int n() const { return n_; }
  const Eigen::MatrixXd& matrix() const { return m_; }
  /// C v computed blockwise: (a, b) -> (b, -a).
  Eigen::VectorXd apply(const Eigen::VectorXd& v) const;
  double gram_norm_squared() const { return m_.squaredNorm(); }

 private:
  int n_;
  Eigen::MatrixXd m_;
};

/// Homogeneous dimension Q = 2n + 2.
constexpr int homogeneous_dimension(int n) { return 2 * n + 2; }

Point group_mul(const Point& p, const Point& q);
Point group_inv(const Point& p);
Point dilate(double s, const Point& p);

/// Columns hold the coordinate components of X_1(p), Y_1(p), ..., T(p).
Eigen::MatrixXd frame_basis(const Point& p);

/// v^perp = -C v, i.e. (a, b) -> (-b, a) on each conjugate pair.
HorVec perp(const HorVec& v);
Eigen::VectorXd perp(const Eigen::VectorXd& v);

}  // namespace heis
