#pragma once

#include "heisenberg/field.hpp"
#include "heisenberg/frame.hpp"

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <vector>

namespace heis {

/// S = {f = 0}. The unit normal points toward {orientation * f > 0}.
class ImplicitSurface {
 public:
  ImplicitSurface() = default;
  explicit ImplicitSurface(ScalarField f, int orientation = +1);

  const ScalarField& f() const { return f_; }
  int orientation() const { return orientation_; }
  int n() const { return f_.n(); }
  const std::string& label() const { return f_.label(); }
  /// orientation * f as a jet.
  Jet jet(const Point& p, int order) const;

 private:
  ScalarField f_;
  int orientation_ = +1;
};

class CharacteristicPoint : public std::runtime_error {
 public:
  CharacteristicPoint(const Point& p, double pH_norm);
  const Point& point() const { return p_; }
  double pH_norm() const { return pH_norm_; }

 private:
  Point p_;
  double pH_norm_;
};

class DegenerateGradient : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class HorizontalGradientVanishes : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotTangent : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Per-point geometry. B, S_sym and A_skew are matrices of operators in the
/// adapted tangent frame: B(b, a) = B_H(tau_a, tau_b) = <B_H(tau_a), tau_b>.
struct SurfaceGeometry {
  Point p;
  FullVec nu;
  double grad_norm = 0.0;   // |grad f|, left-invariant metric
  double hgrad_norm = 0.0;  // |grad_H f|
  double pH_norm = 0.0;
  HorVec nuH;
  HorVec nuH_perp;
  double varpi = 0.0;

  bool has_shape = false;
  Eigen::MatrixXd tau;  // 2n x (2n-1), orthonormal columns spanning H_p S
  /// J(k, a) = X_a(nu_hat^k) for the extension nu_hat = grad_H f / |grad_H f|.
  Eigen::MatrixXd J;
  Eigen::MatrixXd B;
  Eigen::MatrixXd S_sym;
  Eigen::MatrixXd A_skew;
  double Hcurv = 0.0;
  /// Frame derivatives of the extension varpi = T f / |grad_H f|.
  Eigen::VectorXd varpi_grad;

  int n() const { return p.n(); }
};

SurfaceGeometry normal_data(const ImplicitSurface& surf, const Point& p, double charTol = 1e-8);
Eigen::MatrixXd adapted_frame(const SurfaceGeometry& geom);
SurfaceGeometry shape_data(const ImplicitSurface& surf, const SurfaceGeometry& geom);
/// normal_data followed by shape_data, sharing one jet evaluation.
SurfaceGeometry surface_geometry(const ImplicitSurface& surf, const Point& p, double charTol = 1e-8);

/// X_a of the unit normal extension built from f / |grad_H f|, horizontal a only.
Eigen::MatrixXd normalized_normal_jacobian(const ImplicitSurface& surf, const SurfaceGeometry& geom);

/// |grad_nu nu + varpi C nu| with the extension built from f / |grad_H f|.
double nabla_nu_check(const ImplicitSurface& surf, const SurfaceGeometry& geom);

struct TangentialOps {
  HorVec gradHS;
  double dd_nuH = 0.0;
  double dd_nuH_perp = 0.0;
  double lapHS = 0.0;
  /// sum_a <grad_{tau_a} grad_HS phi, tau_a>, computed from an extension.
  double lapHS_intrinsic = 0.0;
  double Lhs = 0.0;
  HorizontalOps horizontal;
};

TangentialOps tangential_ops(const SurfaceGeometry& geom, const FrameJet& phi);
TangentialOps tangential_ops(const ImplicitSurface& surf, const SurfaceGeometry& geom,
                             const ScalarField& phi);

/// A horizontal vector field given by jets of its 2n frame components.
class HorizontalField {
 public:
  using Components = std::function<std::vector<Jet>(const Point& p, int order)>;

  HorizontalField() = default;
  HorizontalField(std::string label, int n, Components comps);
  static HorizontalField from_components(const std::vector<ScalarField>& comps);
  static HorizontalField constant(const Eigen::VectorXd& V);
  /// perp(grad_H f / |grad_H f|)
  static HorizontalField normal_perp(const ImplicitSurface& surf);
  /// grad_H phi - <grad_H phi, nu_hat> nu_hat
  static HorizontalField tangential_gradient(const ImplicitSurface& surf, const ScalarField& phi);

  const std::string& label() const { return label_; }
  int n() const { return n_; }
  std::vector<Jet> jets(const Point& p, int order) const { return comps_(p, order); }
  Eigen::VectorXd value(const Point& p) const;

 private:
  std::string label_;
  int n_ = 0;
  Components comps_;
};

/// Value of X at p and D(k, a) = X_a(X^k).
struct HorizontalFieldJet {
  Eigen::VectorXd value;
  Eigen::MatrixXd D;
};
HorizontalFieldJet horizontal_field_jet(const HorizontalField& X, const Point& p);

/// sum_a <grad_{tau_a} X, tau_a>. With require_tangent the field must satisfy
/// |<X, nu_H>| <= tol * max(1, |X|).
double div_hs(const SurfaceGeometry& geom, const HorizontalFieldJet& X, bool require_tangent = true,
              double tol = 1e-8);
double div_hs(const SurfaceGeometry& geom, const HorizontalField& X, bool require_tangent = true,
              double tol = 1e-8);

/// The surface defined by f / |grad_H f|; jets of order k need f at order k+1.
ImplicitSurface normalize_defining(const ImplicitSurface& surf, double tol = 1e-10);

}  // namespace heis
