#include "heisenberg/surface.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace heis {

namespace {

std::string describe(const Point& p) {
  std::ostringstream os;
  os.precision(6);
  os << "(";
  const Eigen::VectorXd c = p.coords();
  for (Eigen::Index i = 0; i < c.size(); ++i) os << (i ? ", " : "") << c[i];
  os << ")";
  return os.str();
}

Jet horizontal_gradient_norm(const Jet& f, const Point& p) {
  const int m = 2 * p.n();
  Jet N2 = frame_derivative(f, p, 0) * frame_derivative(f, p, 0);
  for (int k = 1; k < m; ++k) {
    const Jet gk = frame_derivative(f, p, k);
    N2 += gk * gk;
  }
  if (N2.value() <= 0.0)
    throw HorizontalGradientVanishes("horizontal gradient vanishes at " + describe(p));
  return sqrt(N2);
}

// Unit horizontal normal extension nu_hat = grad_H f / |grad_H f| as jets.
std::vector<Jet> unit_horizontal_normal(const Jet& f, const Point& p) {
  const int m = 2 * p.n();
  std::vector<Jet> g;
  g.reserve(m);
  for (int k = 0; k < m; ++k) g.push_back(frame_derivative(f, p, k));
  Jet N2 = g[0] * g[0];
  for (int k = 1; k < m; ++k) N2 += g[k] * g[k];
  if (N2.value() <= 0.0)
    throw HorizontalGradientVanishes("horizontal gradient vanishes at " + describe(p));
  const Jet inv = 1.0 / sqrt(N2);
  for (auto& gk : g) gk = gk * inv;
  return g;
}

Eigen::MatrixXd frame_jacobian(const std::vector<Jet>& comps, const Point& p) {
  const int rows = static_cast<int>(comps.size());
  const int d = p.dim();
  Eigen::MatrixXd J(rows, d);
  for (int k = 0; k < rows; ++k)
    for (int a = 0; a < d; ++a) J(k, a) = frame_derivative(comps[k], p, a).value();
  return J;
}

SurfaceGeometry normal_from_jet(const Jet& f, const Point& p, double charTol) {
  const Eigen::VectorXd d = frame_basis(p).transpose() * f.gradient();
  const int m = 2 * p.n();
  SurfaceGeometry g;
  g.p = p;
  g.grad_norm = d.norm();
  if (!(g.grad_norm > 1e-14)) throw DegenerateGradient("gradient of the defining function vanishes at " + describe(p));
  g.hgrad_norm = d.head(m).norm();
  g.pH_norm = g.hgrad_norm / g.grad_norm;
  g.nu = FullVec(d / g.grad_norm);
  if (g.pH_norm <= charTol) throw CharacteristicPoint(p, g.pH_norm);
  g.nuH = HorVec(d.head(m) / g.hgrad_norm);
  g.nuH_perp = perp(g.nuH);
  g.varpi = d[m] / g.hgrad_norm;
  return g;
}

void fill_shape(const Jet& f, SurfaceGeometry& g) {
  const Point& p = g.p;
  const int m = 2 * p.n();
  const auto nuhat = unit_horizontal_normal(f, p);
  g.J = frame_jacobian(nuhat, p);
  g.tau = adapted_frame(g);
  g.B = -g.tau.transpose() * g.J.leftCols(m) * g.tau;
  g.S_sym = 0.5 * (g.B + g.B.transpose());
  g.A_skew = 0.5 * (g.B - g.B.transpose());
  g.Hcurv = g.B.trace();

  const Jet varpi = frame_derivative(f, p, m) / horizontal_gradient_norm(f, p);
  g.varpi_grad.resize(p.dim());
  for (int a = 0; a < p.dim(); ++a) g.varpi_grad[a] = frame_derivative(varpi, p, a).value();
  g.has_shape = true;
}

}  // namespace

ImplicitSurface::ImplicitSurface(ScalarField f, int orientation)
    : f_(std::move(f)), orientation_(orientation >= 0 ? 1 : -1) {}

Jet ImplicitSurface::jet(const Point& p, int order) const {
  Jet j = f_.jet(p, order);
  if (orientation_ < 0) j *= -1.0;
  return j;
}

CharacteristicPoint::CharacteristicPoint(const Point& p, double pH_norm)
    : std::runtime_error("characteristic point at " + describe(p) + " (|P_H nu| = " +
                         std::to_string(pH_norm) + ")"),
      p_(p),
      pH_norm_(pH_norm) {}

SurfaceGeometry normal_data(const ImplicitSurface& surf, const Point& p, double charTol) {
  return normal_from_jet(surf.jet(p, 1), p, charTol);
}

Eigen::MatrixXd adapted_frame(const SurfaceGeometry& geom) {
  const Eigen::VectorXd& nu = geom.nuH.components();
  const int m = static_cast<int>(nu.size());
  Eigen::Index skip = 0;
  nu.cwiseAbs().maxCoeff(&skip);
  Eigen::MatrixXd basis(m, m);
  basis.col(0) = nu;
  int filled = 1;
  for (int i = 0; i < m; ++i) {
    if (i == skip) continue;
    Eigen::VectorXd v = Eigen::VectorXd::Unit(m, i);
    // two passes of classical Gram-Schmidt keep orthogonality near 1e-16
    for (int pass = 0; pass < 2; ++pass)
      for (int j = 0; j < filled; ++j) v -= basis.col(j).dot(v) * basis.col(j);
    basis.col(filled++) = v.normalized();
  }
  return basis.rightCols(m - 1);
}

SurfaceGeometry shape_data(const ImplicitSurface& surf, const SurfaceGeometry& geom) {
  SurfaceGeometry g = geom;
  fill_shape(surf.jet(geom.p, 2), g);
  return g;
}

SurfaceGeometry surface_geometry(const ImplicitSurface& surf, const Point& p, double charTol) {
  const Jet f = surf.jet(p, 2);
  SurfaceGeometry g = normal_from_jet(f, p, charTol);
  fill_shape(f, g);
  return g;
}

Eigen::MatrixXd normalized_normal_jacobian(const ImplicitSurface& surf, const SurfaceGeometry& geom) {
  const Point& p = geom.p;
  const Jet f = surf.jet(p, 3);
  // f / |grad_H f| has unit horizontal gradient on S
  const Jet ftilde = f.truncated(2) / horizontal_gradient_norm(f, p);
  return frame_jacobian(unit_horizontal_normal(ftilde, p), p).leftCols(2 * p.n());
}

double nabla_nu_check(const ImplicitSurface& surf, const SurfaceGeometry& geom) {
  const Eigen::VectorXd& nu = geom.nuH.components();
  const Eigen::VectorXd r =
      normalized_normal_jacobian(surf, geom) * nu + geom.varpi * StructuralMatrix(geom.n()).apply(nu);
  return r.norm();
}

TangentialOps tangential_ops(const SurfaceGeometry& geom, const FrameJet& phi) {
  if (!geom.has_shape) throw std::logic_error("tangential_ops: geometry lacks shape data");
  const int m = 2 * geom.n();
  TangentialOps t;
  t.horizontal = horizontal_ops(phi);
  const Eigen::VectorXd& g = t.horizontal.gradH.components();
  const Eigen::VectorXd& nu = geom.nuH.components();
  t.dd_nuH = g.dot(nu);
  t.dd_nuH_perp = g.dot(geom.nuH_perp.components());
  t.gradHS = HorVec(g - t.dd_nuH * nu);
  const Eigen::MatrixXd& H = t.horizontal.hessH;
  t.lapHS = t.horizontal.lapH + geom.Hcurv * t.dd_nuH - nu.dot(H * nu);
  const Eigen::MatrixXd M = H - t.dd_nuH * geom.J.leftCols(m);
  t.lapHS_intrinsic = (geom.tau.transpose() * M * geom.tau).trace();
  t.Lhs = t.lapHS - geom.varpi * t.dd_nuH_perp;
  return t;
}

TangentialOps tangential_ops(const ImplicitSurface&, const SurfaceGeometry& geom,
                             const ScalarField& phi) {
  return tangential_ops(geom, frame_jet(phi, geom.p));
}

HorizontalField::HorizontalField(std::string label, int n, Components comps)
    : label_(std::move(label)), n_(n), comps_(std::move(comps)) {}

HorizontalField HorizontalField::from_components(const std::vector<ScalarField>& comps) {
  if (comps.empty() || comps.size() % 2 != 0)
    throw DimensionMismatch("HorizontalField: need 2n component fields");
  const int n = static_cast<int>(comps.size()) / 2;
  std::string label = "(";
  for (std::size_t i = 0; i < comps.size(); ++i) label += (i ? ", " : "") + comps[i].label();
  label += ")";
  return HorizontalField(label, n, [comps](const Point& p, int order) {
    std::vector<Jet> out;
    out.reserve(comps.size());
    for (const auto& c : comps) out.push_back(c.jet(p, order));
    return out;
  });
}

HorizontalField HorizontalField::constant(const Eigen::VectorXd& V) {
  if (V.size() == 0 || V.size() % 2 != 0) throw DimensionMismatch("HorizontalField: need 2n components");
  return HorizontalField("constant", static_cast<int>(V.size()) / 2, [V](const Point& p, int order) {
    std::vector<Jet> out;
    for (Eigen::Index k = 0; k < V.size(); ++k) out.push_back(Jet::constant(p.dim(), order, V[k]));
    return out;
  });
}

HorizontalField HorizontalField::normal_perp(const ImplicitSurface& surf) {
  return HorizontalField("nu_H_perp", surf.n(), [surf](const Point& p, int order) {
    const auto nu = unit_horizontal_normal(surf.jet(p, order + 1), p);
    std::vector<Jet> out(nu.size());
    for (std::size_t i = 0; i < nu.size() / 2; ++i) {
      out[2 * i] = -nu[2 * i + 1];
      out[2 * i + 1] = nu[2 * i];
    }
    return out;
  });
}

HorizontalField HorizontalField::tangential_gradient(const ImplicitSurface& surf,
                                                     const ScalarField& phi) {
  return HorizontalField("grad_HS " + phi.label(), surf.n(), [surf, phi](const Point& p, int order) {
    const auto nu = unit_horizontal_normal(surf.jet(p, order + 1), p);
    const Jet ph = phi.jet(p, order + 1);
    std::vector<Jet> g;
    for (std::size_t k = 0; k < nu.size(); ++k) g.push_back(frame_derivative(ph, p, static_cast<int>(k)));
    Jet along = g[0] * nu[0];
    for (std::size_t k = 1; k < nu.size(); ++k) along += g[k] * nu[k];
    for (std::size_t k = 0; k < nu.size(); ++k) g[k] -= along * nu[k];
    return g;
  });
}

Eigen::VectorXd HorizontalField::value(const Point& p) const {
  const auto j = comps_(p, 0);
  Eigen::VectorXd v(j.size());
  for (std::size_t k = 0; k < j.size(); ++k) v[static_cast<Eigen::Index>(k)] = j[k].value();
  return v;
}

HorizontalFieldJet horizontal_field_jet(const HorizontalField& X, const Point& p) {
  if (X.n() != p.n()) throw DimensionMismatch("horizontal field and point live in different H^n");
  const auto comps = X.jets(p, 1);
  const int m = 2 * p.n();
  HorizontalFieldJet out;
  out.value.resize(m);
  out.D.resize(m, m);
  for (int k = 0; k < m; ++k) {
    out.value[k] = comps[k].value();
    for (int a = 0; a < m; ++a) out.D(k, a) = frame_derivative(comps[k], p, a).value();
  }
  return out;
}

double div_hs(const SurfaceGeometry& geom, const HorizontalFieldJet& X, bool require_tangent,
              double tol) {
  if (!geom.has_shape) throw std::logic_error("div_hs: geometry lacks shape data");
  if (require_tangent) {
    const double normal = std::abs(X.value.dot(geom.nuH.components()));
    if (normal > tol * std::max(1.0, X.value.norm()))
      throw NotTangent("div_hs: field has normal component " + std::to_string(normal) + " at " +
                       describe(geom.p));
  }
  return (geom.tau.transpose() * X.D * geom.tau).trace();
}

double div_hs(const SurfaceGeometry& geom, const HorizontalField& X, bool require_tangent, double tol) {
  return div_hs(geom, horizontal_field_jet(X, geom.p), require_tangent, tol);
}

ImplicitSurface normalize_defining(const ImplicitSurface& surf, double tol) {
  const int top = surf.f().max_order() - 1;
  ScalarField ft(
      surf.label() + "/|grad_H|", surf.n(),
      [surf, tol, top](const Point& p, int order) {
        if (order > top) throw UnsupportedOrder(order);
        const Jet f = surf.jet(p, order + 1);
        const int m = 2 * p.n();
        Jet N2 = frame_derivative(f, p, 0) * frame_derivative(f, p, 0);
        for (int k = 1; k < m; ++k) {
          const Jet gk = frame_derivative(f, p, k);
          N2 += gk * gk;
        }
        if (!(N2.value() > tol * tol))
          throw HorizontalGradientVanishes("normalize_defining: |grad_H f| below tolerance at " +
                                           describe(p));
        return f.truncated(order) / sqrt(N2);
      });
  ft.with_max_order(top);
  return ImplicitSurface(ft, +1);
}

}  // namespace heis
