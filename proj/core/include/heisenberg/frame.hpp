#pragma once

#include "heisenberg/field.hpp"
#include "heisenberg/group.hpp"
#include "heisenberg/jet.hpp"

#include <Eigen/Dense>

#include <vector>

namespace heis {

/// Frame derivatives of a scalar at one point.
/// d2(i, j) = X_j(X_i phi), indices over X_1, Y_1, ..., X_n, Y_n, T.
struct FrameJet {
  double value = 0.0;
  FullVec d1;
  Eigen::MatrixXd d2;

  int n() const { return d1.n(); }
};

/// Applies the frame field with index a (2n means T) to a jet in coordinate
/// variables based at p. The result has one order less.
Jet frame_derivative(const Jet& g, const Point& p, int a);

/// All 2n+1 frame derivatives of g.
std::vector<Jet> frame_gradient(const Jet& g, const Point& p);

/// Frame data from Euclidean value, gradient and Hessian at p. The second
/// order part includes the derivatives of the -y_i/2, x_i/2 coefficients.
FrameJet assemble_frame_jet(double value, const Eigen::VectorXd& grad, const Eigen::MatrixXd& hess,
                            const Point& p);
FrameJet frame_jet(const Jet& j, const Point& p);
FrameJet frame_jet(const ScalarField& field, const Point& p);

struct HorizontalOps {
  HorVec gradH;
  Eigen::MatrixXd hessH;
  double lapH = 0.0;
  double Tphi = 0.0;
  /// X_i(T phi), i horizontal.
  HorVec gradH_Tphi;
};

HorizontalOps horizontal_ops(const FrameJet& fj);
HorizontalOps horizontal_ops(const ScalarField& field, const Point& p);

class HessianSkewMismatch : public std::runtime_error {
 public:
  HessianSkewMismatch(double deviation);
  double deviation() const { return deviation_; }

 private:
  double deviation_;
};

struct HessianSplit {
  Eigen::MatrixXd sym;
  Eigen::MatrixXd skew;
  double gramSym = 0.0;
  double gramSkew = 0.0;
};

/// Throws HessianSkewMismatch when skew differs from -(T phi / 2) C by more
/// than tol * max(1, |T phi|).
HessianSplit hessian_split(const Eigen::MatrixXd& hessH, double Tphi, double tol = 1e-9);

/// Largest relative deviation |a - b| / max(1, |a|) between frame_jet and the
/// same assembly fed with finite-difference partials.
double fd_crosscheck(const ScalarField& field, const Point& p, double step = 1e-5);

/// Both sides of the Bochner-type formula
///   1/2 Lap_H |grad_H phi|^2 = |Hess_H phi|^2 + <grad_H Lap_H phi, grad_H phi>
///                              + 2 <T grad_H phi, C grad_H phi>.
struct BochnerSides {
  double lhs = 0.0;
  double rhs = 0.0;
};
BochnerSides bochner_sides(const ScalarField& field, const Point& p);

}  // namespace heis
