#pragma once

#include "heisenberg/quadrature.hpp"

#include <functional>
#include <span>
#include <utility>

namespace heis {

// Charts for the surfaces and domains used by the identity suite. Sphere-like
// charts are polar about the t-axis, so the characteristic points sit on the
// faces theta = 0 and theta = pi of the parameter box.
//
// Parameters for n = 1: (theta, phi); n = 2: (theta, chi, xi1, xi2) with the
// horizontal unit direction (cos chi e^{i xi1}, sin chi e^{i xi2}).
// Only n = 1 and n = 2 are provided.

/// Unit direction in R^{2n+1} from polar parameters (as jets).
std::vector<Jet> polar_direction(std::span<const Jet> u, int n);
ParamBox polar_box(int n);
std::vector<int> polar_axis_weight(int n);
/// Horizontal unit vector on S^{2n-1} from the trailing polar parameters.
std::vector<Jet> horizontal_direction(std::span<const Jet> u, int n);
ParamBox horizontal_sphere_box(int n);

SurfaceChart sphere_chart(const Eigen::VectorXd& center, double r);
SurfaceChart ellipsoid_chart(int n, double a, double b, double c);
SurfaceChart torus_chart(double R, double r);
SurfaceChart cylinder_patch_chart(int n, double r, double t0, double t1);

DomainChart ball_chart(const Eigen::VectorXd& center, double r);
DomainChart solid_ellipsoid_chart(int n, double a, double b, double c);
DomainChart solid_torus_chart(double R, double r);
DomainChart box_chart(const Eigen::VectorXd& lo, const Eigen::VectorXd& hi);

/// Rays x = base(u) + lambda * dir(u) used to build charts of level sets.
struct RayFamily {
  std::string label;
  int n = 1;
  ParamBox box;
  std::function<std::pair<std::vector<Jet>, std::vector<Jet>>(std::span<const Jet> u)> rays;
  double lambda_guess = 1.0;
  std::vector<Exclusion> exclusions;
  std::vector<int> axis_weight;
  bool closed = true;
};

RayFamily polar_rays(const Eigen::VectorXd& center, double lambda_guess = 1.0);
/// Horizontal rays from the t-axis at heights t in [t0, t1].
RayFamily cylinder_rays(int n, double t0, double t1, double lambda_guess = 1.0);

/// Distance parameter lambda with F(base + lambda dir) = s, by Newton.
double solve_ray(const ScalarField& F, const Eigen::VectorXd& base, const Eigen::VectorXd& dir, double s,
                 double guess);

/// Chart of {F = s} along the rays.
SurfaceChart level_set_chart(const ScalarField& F, const RayFamily& rays, double s);
/// Chart of {s_lo < F < s_hi} along the rays; the last unit-box axis runs
/// linearly in lambda between the two level sets.
DomainChart shell_chart(const ScalarField& F, const RayFamily& rays, double s_lo, double s_hi);

/// F - s as a field.
ScalarField shifted(const ScalarField& F, double s);

/// The rays with every edge exclusion turned into a strip of width delta cut
/// from the parameter box. Ball exclusions are not supported here.
RayFamily trimmed(const RayFamily& rays, double delta);

/// Both sides of the coarea formula on the shell s_lo < F < s_hi:
///   lhs = int_shell psi |grad_H F|,  rhs = int ds int_{F = s} psi sigma_H,
/// with psi evaluated on the geometry of the level set through each point.
/// The s-integral uses a Gauss rule with sliceCount nodes.
struct CoareaResult {
  IntegralResult lhs;
  IntegralResult rhs;
};
CoareaResult coarea_slices(const ScalarField& F, const RayFamily& rays, double s_lo, double s_hi, int sliceCount,
                           const std::function<double(const SurfaceGeometry&)>& psi, const QuadratureSpec& spec);

}  // namespace heis
