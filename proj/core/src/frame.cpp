#include "heisenberg/frame.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace heis {

Jet frame_derivative(const Jet& g, const Point& p, int a) {
  const int d = p.dim();
  if (g.dim() != d) throw DimensionMismatch("frame_derivative: jet dimension does not match point");
  if (a < 0 || a >= d) throw std::out_of_range("frame_derivative: index out of range");
  const int tk = d - 1;
  if (a == tk) return g.derivative(tk);
  const int i = a / 2;
  // X_i = d/dx_i - (y_i/2) d/dt,  Y_i = d/dy_i + (x_i/2) d/dt
  const bool is_x = (a % 2 == 0);
  const int other = is_x ? 2 * i + 1 : 2 * i;
  const double c0 = is_x ? -0.5 * p.z[2 * i + 1] : 0.5 * p.z[2 * i];
  const double c1 = is_x ? -0.5 : 0.5;
  return g.derivative(a) + g.derivative(tk).times_affine(c0, other, c1);
}

std::vector<Jet> frame_gradient(const Jet& g, const Point& p) {
  std::vector<Jet> out;
  out.reserve(p.dim());
  for (int a = 0; a < p.dim(); ++a) out.push_back(frame_derivative(g, p, a));
  return out;
}

FrameJet assemble_frame_jet(double value, const Eigen::VectorXd& grad, const Eigen::MatrixXd& hess,
                            const Point& p) {
  const int d = p.dim();
  if (grad.size() != d || hess.rows() != d || hess.cols() != d)
    throw DimensionMismatch("assemble_frame_jet: partials do not match point dimension");
  const Eigen::MatrixXd F = frame_basis(p);
  FrameJet fj;
  fj.value = value;
  fj.d1 = FullVec(F.transpose() * grad);
  fj.d2 = F.transpose() * hess * F;
  const double phi_t = grad[d - 1];
  for (int i = 0; i < p.n(); ++i) {
    fj.d2(2 * i, 2 * i + 1) -= 0.5 * phi_t;
    fj.d2(2 * i + 1, 2 * i) += 0.5 * phi_t;
  }
  return fj;
}

FrameJet frame_jet(const Jet& j, const Point& p) {
  if (j.order() < 2) throw UnsupportedOrder(j.order());
  return assemble_frame_jet(j.value(), j.gradient(), j.hessian(), p);
}

FrameJet frame_jet(const ScalarField& field, const Point& p) {
  return frame_jet(jet_eval(field, p, 2), p);
}

HorizontalOps horizontal_ops(const FrameJet& fj) {
  const int m = 2 * fj.n();
  HorizontalOps ops;
  ops.gradH = HorVec(fj.d1.components().head(m));
  ops.hessH = fj.d2.topLeftCorner(m, m);
  ops.lapH = ops.hessH.trace();
  ops.Tphi = fj.d1.vertical();
  ops.gradH_Tphi = HorVec(fj.d2.row(m).head(m).transpose());
  return ops;
}

HorizontalOps horizontal_ops(const ScalarField& field, const Point& p) {
  return horizontal_ops(frame_jet(field, p));
}

HessianSkewMismatch::HessianSkewMismatch(double deviation)
    : std::runtime_error("Hessian skew part deviates from -(T phi/2) C by " +
                         std::to_string(deviation)),
      deviation_(deviation) {}

HessianSplit hessian_split(const Eigen::MatrixXd& hessH, double Tphi, double tol) {
  if (hessH.rows() != hessH.cols() || hessH.rows() % 2 != 0)
    throw DimensionMismatch("hessian_split: expected a 2n x 2n matrix");
  const int n = static_cast<int>(hessH.rows()) / 2;
  HessianSplit s;
  s.sym = 0.5 * (hessH + hessH.transpose());
  s.skew = 0.5 * (hessH - hessH.transpose());
  s.gramSym = s.sym.squaredNorm();
  s.gramSkew = s.skew.squaredNorm();
  const Eigen::MatrixXd expected = -0.5 * Tphi * StructuralMatrix(n).matrix();
  const double dev = (s.skew - expected).cwiseAbs().maxCoeff();
  if (dev > tol * std::max(1.0, std::abs(Tphi))) throw HessianSkewMismatch(dev);
  return s;
}

double fd_crosscheck(const ScalarField& field, const Point& p, double step) {
  const int d = p.dim();
  const Eigen::VectorXd base = p.coords();
  auto shifted = [&](int k, double h) {
    Eigen::VectorXd c = base;
    c[k] += h;
    return Point::from_coords(c);
  };
  // First partials from values; second partials from differences of exact
  // first partials, which keeps the roundoff at eps/step instead of eps/step^2.
  Eigen::VectorXd grad(d);
  Eigen::MatrixXd hess(d, d);
  for (int k = 0; k < d; ++k) {
    const Jet plus = field.jet(shifted(k, step), 1);
    const Jet minus = field.jet(shifted(k, -step), 1);
    grad[k] = (plus.value() - minus.value()) / (2.0 * step);
    hess.col(k) = (plus.gradient() - minus.gradient()) / (2.0 * step);
  }
  hess = 0.5 * (hess + hess.transpose());
  const FrameJet fd = assemble_frame_jet(field.value(p), grad, hess, p);
  const FrameJet ad = frame_jet(field, p);

  auto rel = [](double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(a)); };
  double worst = rel(ad.value, fd.value);
  for (int i = 0; i < d; ++i) {
    worst = std::max(worst, rel(ad.d1[i], fd.d1[i]));
    for (int j = 0; j < d; ++j) worst = std::max(worst, rel(ad.d2(i, j), fd.d2(i, j)));
  }
  return worst;
}

BochnerSides bochner_sides(const ScalarField& field, const Point& p) {
  const int m = 2 * p.n();
  const Jet phi = jet_eval(field, p, 3);
  std::vector<Jet> g;
  for (int i = 0; i < m; ++i) g.push_back(frame_derivative(phi, p, i));

  Jet half_sq = g[0] * g[0];
  for (int i = 1; i < m; ++i) half_sq += g[i] * g[i];
  half_sq *= 0.5;

  Jet psi = frame_derivative(g[0], p, 0);
  for (int i = 1; i < m; ++i) psi += frame_derivative(g[i], p, i);

  BochnerSides s;
  const StructuralMatrix C(p.n());
  Eigen::VectorXd gv(m), Tg(m);
  for (int i = 0; i < m; ++i) {
    s.lhs += frame_derivative(frame_derivative(half_sq, p, i), p, i).value();
    gv[i] = g[i].value();
    Tg[i] = frame_derivative(g[i], p, m).value();
    for (int j = 0; j < m; ++j) {
      const double h = frame_derivative(g[i], p, j).value();
      s.rhs += h * h;
    }
    s.rhs += frame_derivative(psi, p, i).value() * gv[i];
  }
  s.rhs += 2.0 * Tg.dot(C.apply(gv));
  return s;
}

}  // namespace heis
