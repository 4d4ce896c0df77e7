#include <doctest.h>

#include "heisenberg/charts.hpp"
#include "sampling.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace heis;
using namespace testing_util;

namespace {
constexpr double kPi = std::numbers::pi;

QuadratureSpec gl(int order, int levels) {
  QuadratureSpec s;
  s.orders = {order};
  s.levels = levels;
  return s;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }
}  // namespace

TEST_CASE("Gauss-Legendre rules") {
  for (int n : {1, 2, 5, 16, 33, 128}) {
    const auto& r = gauss_legendre(n);
    double w = 0.0;
    for (double x : r.weights) w += x;
    CHECK(w == doctest::Approx(2.0).epsilon(1e-14));
    // exact for degree 2n-1
    double m = 0.0;
    for (int i = 0; i < n; ++i) m += r.weights[i] * std::pow(r.nodes[i], 2 * n - 2);
    CHECK(m == doctest::Approx(2.0 / (2 * n - 1)).epsilon(1e-12));
    for (int i = 1; i < n; ++i) CHECK(r.nodes[i] > r.nodes[i - 1]);
  }
  CHECK_THROWS(gauss_legendre(0));
}

TEST_CASE("pairwise sum is order-fixed and accurate") {
  std::vector<double> v(1000, 0.1);
  CHECK(pairwise_sum(v) == doctest::Approx(100.0).epsilon(1e-14));
  CHECK(pairwise_sum(std::vector<double>{}) == 0.0);
}

TEST_CASE("parallel evaluation matches serial evaluation bitwise") {
  const SurfaceChart ch = ellipsoid_chart(1, 1.0, 0.8, 0.6);
  const auto f = [](const SurfaceGeometry& g) { return g.Hcurv * g.varpi * g.varpi + g.pH_norm; };
  set_worker_threads(1);
  const double a = surface_integral(ch, f, Measure::h_perimeter, gl(16, 1), 0.05).value;
  set_worker_threads(4);
  const double b = surface_integral(ch, f, Measure::h_perimeter, gl(16, 1), 0.05).value;
  set_worker_threads(0);
  CHECK(a == b);
}

TEST_CASE("domain volumes") {
  const double ball = 4.0 * kPi / 3.0;
  const auto r = domain_integral(ball_chart(Eigen::VectorXd::Zero(3), 1.0), [](const Point&) { return 1.0; }, gl(32, 2));
  CHECK(rel(r.value, ball) < 1e-6);
  CHECK(r.refinementTrail.size() == 2);
  CHECK(r.errorEstimate >= 0.0);
  const auto b = domain_integral(box_chart(Eigen::Vector3d(0, 0, 0), Eigen::Vector3d(1, 1, 1)),
                                 [](const Point&) { return 1.0; }, gl(4, 1));
  CHECK(b.value == doctest::Approx(1.0).epsilon(1e-14));
  // volume of the unit 5-ball
  const auto b5 = domain_integral(ball_chart(Eigen::VectorXd::Zero(5), 1.0), [](const Point&) { return 1.0; }, gl(8, 1));
  CHECK(rel(b5.value, 8.0 * kPi * kPi / 15.0) < 1e-7);
  // solid torus: 2 pi^2 R r^2
  const auto t = domain_integral(solid_torus_chart(2.0, 0.5), [](const Point&) { return 1.0; }, gl(16, 1));
  CHECK(rel(t.value, 2 * kPi * kPi * 2.0 * 0.25) < 1e-12);
  // integral of Lap_H(rho^2/2) = 2n is 2n Vol
  const auto e = domain_integral(solid_ellipsoid_chart(1, 1.2, 0.9, 0.7),
                                 [](const Point& p) { return horizontal_ops(fields::rho2_half(1), p).lapH; }, gl(16, 1));
  CHECK(rel(e.value, 2.0 * 4.0 * kPi / 3.0 * 1.2 * 0.9 * 0.7) < 1e-12);
}

TEST_CASE("Haar measure is left invariant") {
  const DomainChart D = ball_chart(Eigen::VectorXd::Zero(3), 1.0);
  const ScalarField phi = parse_polynomial("x^2*t + y - 3*t^2*x*y + 1", 1);
  const Point q = pt({0.7, -1.3, 2.1});
  const Point qi = group_inv(q);
  const auto a = domain_integral(D, [&](const Point& p) { return phi.value(p); }, gl(16, 1));
  const auto b = domain_integral(D.translated(q), [&](const Point& p) { return phi.value(group_mul(qi, p)); }, gl(16, 1));
  CHECK(std::abs(a.value - b.value) <= 1e-8 * std::max(1.0, std::abs(a.value)));
}

TEST_CASE("vertical cylinder patch has H-perimeter 2 pi") {
  const SurfaceChart ch = cylinder_patch_chart(1, 1.0, 0.0, 1.0);
  CHECK_FALSE(ch.closed());
  const auto r = surface_integral(ch, [](const SurfaceGeometry&) { return 1.0; }, Measure::h_perimeter, gl(16, 2));
  CHECK(r.value == doctest::Approx(2 * kPi).epsilon(1e-13));
  // the pulled-back metric is flat on this patch
  const auto s = surface_integral(ch, [](const SurfaceGeometry&) { return 1.0; }, Measure::riemannian, gl(16, 2));
  CHECK(s.value == doctest::Approx(2 * kPi).epsilon(1e-13));
  // and in H^2: |S^3| = 2 pi^2
  const auto h = surface_integral(cylinder_patch_chart(2, 1.0, 0.0, 1.0), [](const SurfaceGeometry&) { return 1.0; },
                                  Measure::h_perimeter, gl(8, 1));
  CHECK(h.value == doctest::Approx(2 * kPi * kPi).epsilon(1e-9));
}

TEST_CASE("sphere area: tensor Gauss against Monte Carlo") {
  const SurfaceChart ch = sphere_chart(Eigen::VectorXd::Zero(3), 1.0);
  const auto g = surface_integral(ch, [](const SurfaceGeometry&) { return 1.0; }, Measure::riemannian, gl(32, 2));
  CHECK(g.cauchy);
  QuadratureSpec mc;
  mc.rule = Rule::monte_carlo;
  mc.samples = 1 << 15;
  mc.levels = 1;
  mc.seed = 42;
  const auto m = surface_integral(ch, [](const SurfaceGeometry&) { return 1.0; }, Measure::riemannian, mc);
  CHECK(rel(m.value, g.value) < 1e-3);
  // the metric is not Euclidean: area exceeds 4 pi
  CHECK(g.value > 4 * kPi);
}

TEST_CASE("measure relation at node level") {
  const SurfaceChart ch = ellipsoid_chart(1, 1.0, 1.0, 0.7);
  const auto a = surface_integral(ch, [](const SurfaceGeometry& g) { return g.Hcurv; }, Measure::h_perimeter, gl(12, 1));
  const auto b = surface_integral(ch, [](const SurfaceGeometry& g) { return g.Hcurv * g.pH_norm; }, Measure::riemannian,
                                  gl(12, 1));
  CHECK(a.value == doctest::Approx(b.value).epsilon(1e-15));
}

TEST_CASE("odd integrand on a t-symmetric surface") {
  const auto r = surface_integral(ellipsoid_chart(1, 1.0, 1.0, 0.7), [](const SurfaceGeometry& g) { return g.varpi; },
                                  Measure::h_perimeter, gl(32, 2));
  CHECK(std::abs(r.value) < 1e-12);
}

TEST_CASE("power-law fit") {
  std::vector<std::pair<double, double>> pts;
  for (double d = 0.2; d > 0.005; d *= 0.5) pts.emplace_back(d, 3.0 - 0.7 * std::pow(d, 1.5));
  const auto t = fit_power_law(pts);
  CHECK(t.converged);
  CHECK(t.limit == doctest::Approx(3.0).epsilon(1e-8));
  CHECK(t.power == doctest::Approx(1.5).epsilon(1e-6));
  std::vector<std::pair<double, double>> flat{{0.2, 1.0}, {0.1, 1.0}, {0.05, 1.0}};
  CHECK(fit_power_law(flat).converged);
  std::vector<std::pair<double, double>> diverge;
  for (double d = 0.2; d > 0.005; d *= 0.5) diverge.emplace_back(d, 1.0 / d);
  CHECK_FALSE(fit_power_law(diverge).converged);
}

TEST_CASE("excision of removable caps") {
  const SurfaceChart ch = sphere_chart(Eigen::VectorXd::Zero(3), 1.0);
  const QuadratureSpec s = gl(32, 2);
  const auto full = surface_integral(ch, [](const SurfaceGeometry&) { return 1.0; }, Measure::riemannian, s);
  const auto ex = excised_surface_integral(ch, [](const SurfaceGeometry&) { return 1.0; }, Measure::riemannian, s);
  REQUIRE(ex.excision);
  CHECK(ex.excision->converged);
  CHECK(ex.excision->power > 0.0);
  CHECK(std::abs(ex.value - full.value) <= 1e-6 * full.value);
  // varpi^2 is integrable against the H-perimeter
  const auto w = excised_surface_integral(ch, [](const SurfaceGeometry& g) { return g.varpi * g.varpi; },
                                          Measure::h_perimeter, s);
  REQUIRE(w.excision->direct);
  CHECK(std::abs(w.value - *w.excision->direct) <= 1e-4 * std::abs(*w.excision->direct));
}

TEST_CASE("characteristic scan") {
  const SurfaceChart sphere = sphere_chart(Eigen::VectorXd::Zero(3), 1.0);
  const auto cells = char_scan(sphere, {8, 16});
  CHECK(cells.size() == 32);
  for (const auto& c : cells) CHECK((c[0] == 0 || c[0] == 7));
  const auto ex = exclusions_from_scan(sphere, {8, 16}, cells);
  REQUIRE(ex.size() == 2);
  CHECK(ex[0].kind == Exclusion::Kind::edge);
  CHECK(ex[0].axis == 0);

  CHECK(char_scan(cylinder_patch_chart(1, 1.0, -1.0, 1.0), {8, 8}).empty());

  // plane t = 0 over [-1,1]^2
  SurfaceChart plane("plane", ImplicitSurface(fields::coordinate(1, 2)),
                     {Eigen::Vector2d(-1, -1), Eigen::Vector2d(1, 1)}, [](const Eigen::VectorXd& u) {
                       return std::vector<Jet>{Jet::variable(2, 1, 0, u[0]), Jet::variable(2, 1, 1, u[1]),
                                               Jet::constant(2, 1, 0.0)};
                     });
  const auto pc = char_scan(plane, {5, 5});
  REQUIRE(pc.size() == 1);
  CHECK(pc[0] == std::vector<int>{2, 2});
  const auto pe = exclusions_from_scan(plane, {5, 5}, pc);
  REQUIRE(pe.size() == 1);
  CHECK(pe[0].kind == Exclusion::Kind::ball);
  CHECK(pe[0].center.norm() < 1e-15);
}

TEST_CASE("level-set charts land on the level set") {
  const ImplicitSurface s(fields::ellipsoid(1, 1.0, 1.0, 0.7));
  const ImplicitSurface ns = normalize_defining(s);
  const RayFamily rays = polar_rays(Eigen::VectorXd::Zero(3));
  const SurfaceChart lc = level_set_chart(ns.f(), rays, 0.03);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> th(0.1, 3.0), ph(0.0, 6.0);
  for (int k = 0; k < 10; ++k) {
    const Eigen::Vector2d u(th(rng), ph(rng));
    CHECK(ns.f().value(lc.point(u)) == doctest::Approx(0.03).epsilon(1e-10));
  }
  // zero level reproduces the explicit chart area
  const auto a = surface_integral(level_set_chart(s.f(), rays, 0.0), [](const SurfaceGeometry&) { return 1.0; },
                                  Measure::riemannian, gl(48, 1));
  const auto b = surface_integral(ellipsoid_chart(1, 1.0, 1.0, 0.7), [](const SurfaceGeometry&) { return 1.0; },
                                  Measure::riemannian, gl(48, 1));
  CHECK(rel(a.value, b.value) < 1e-11);
  // shell volume between two spheres
  const auto v = domain_integral(shell_chart(fields::euclidean_sphere(Eigen::VectorXd::Zero(3), 1.0),
                                             polar_rays(Eigen::VectorXd::Zero(3)), -0.19, 0.21),
                                 [](const Point&) { return 1.0; }, gl(12, 1));
  CHECK(rel(v.value, 4.0 * kPi / 3.0 * (std::pow(1.1, 3) - std::pow(0.9, 3))) < 1e-12);
}
