#include "heisenberg/group.hpp"

#include <cmath>

namespace heis {

Point::Point(Eigen::VectorXd z_, double t_) : z(std::move(z_)), t(t_) {
  if (z.size() == 0 || z.size() % 2 != 0)
    throw DimensionMismatch("Point: horizontal part must have positive even length, got " +
                            std::to_string(z.size()));
}

Point Point::from_coords(const Eigen::VectorXd& coords) {
  if (coords.size() < 3 || coords.size() % 2 == 0)
    throw DimensionMismatch("Point::from_coords: expected 2n+1 coordinates, got " +
                            std::to_string(coords.size()));
  return Point(coords.head(coords.size() - 1), coords[coords.size() - 1]);
}

Point Point::origin(int n) { return Point(Eigen::VectorXd::Zero(2 * n), 0.0); }

Eigen::VectorXd Point::coords() const {
  Eigen::VectorXd c(z.size() + 1);
  c.head(z.size()) = z;
  c[z.size()] = t;
  return c;
}

bool Point::is_finite() const { return z.allFinite() && std::isfinite(t); }

HorVec::HorVec(Eigen::VectorXd c) : c_(std::move(c)) {
  if (c_.size() % 2 != 0) throw DimensionMismatch("HorVec: length must be 2n");
}

double HorVec::dot(const HorVec& o) const {
  if (o.c_.size() != c_.size()) throw DimensionMismatch("HorVec::dot: length mismatch");
  return c_.dot(o.c_);
}

FullVec::FullVec(Eigen::VectorXd c) : c_(std::move(c)) {
  if (c_.size() % 2 != 1) throw DimensionMismatch("FullVec: length must be 2n+1");
}

StructuralMatrix::StructuralMatrix(int n) : n_(n), m_(Eigen::MatrixXd::Zero(2 * n, 2 * n)) {
  if (n < 1) throw DimensionMismatch("StructuralMatrix: n must be >= 1");
  for (int i = 0; i < n; ++i) {
    m_(2 * i, 2 * i + 1) = 1.0;
    m_(2 * i + 1, 2 * i) = -1.0;
  }
}

Eigen::VectorXd StructuralMatrix::apply(const Eigen::VectorXd& v) const {
  if (v.size() != 2 * n_) throw DimensionMismatch("StructuralMatrix::apply: length mismatch");
  Eigen::VectorXd out(v.size());
  for (int i = 0; i < n_; ++i) {
    out[2 * i] = v[2 * i + 1];
    out[2 * i + 1] = -v[2 * i];
  }
  return out;
}

Point group_mul(const Point& p, const Point& q) {
  if (p.n() != q.n())
    throw DimensionMismatch("group_mul: points live in H^" + std::to_string(p.n()) + " and H^" +
                            std::to_string(q.n()));
  double symplectic = 0.0;
  for (int i = 0; i < p.n(); ++i) {
    symplectic += p.z[2 * i] * q.z[2 * i + 1] - q.z[2 * i] * p.z[2 * i + 1];
  }
  return Point(p.z + q.z, p.t + q.t + 0.5 * symplectic);
}

Point group_inv(const Point& p) { return Point(-p.z, -p.t); }

Point dilate(double s, const Point& p) {
  if (s < 0.0) throw std::invalid_argument("dilate: scale must be nonnegative");
  return Point(s * p.z, s * s * p.t);
}

Eigen::MatrixXd frame_basis(const Point& p) {
  const int n = p.n();
  const int d = 2 * n + 1;
  Eigen::MatrixXd F = Eigen::MatrixXd::Identity(d, d);
  for (int i = 0; i < n; ++i) {
    F(d - 1, 2 * i) = -0.5 * p.z[2 * i + 1];
    F(d - 1, 2 * i + 1) = 0.5 * p.z[2 * i];
  }
  return F;
}

Eigen::VectorXd perp(const Eigen::VectorXd& v) {
  if (v.size() % 2 != 0) throw DimensionMismatch("perp: length must be 2n");
  Eigen::VectorXd out(v.size());
  for (Eigen::Index i = 0; i < v.size() / 2; ++i) {
    out[2 * i] = -v[2 * i + 1];
    out[2 * i + 1] = v[2 * i];
  }
  return out;
}

HorVec perp(const HorVec& v) { return HorVec(perp(v.components())); }

}  // namespace heis
