#include <doctest.h>

#include "heisenberg/surface.hpp"
#include "sampling.hpp"

#include <cmath>
#include <random>

using namespace heis;
using namespace testing_util;

namespace {

struct Case {
  const char* name;
  ImplicitSurface surf;
  std::function<Point(std::mt19937_64&)> sample;
};

std::vector<Case> cases() {
  return {
      {"sphere H1", ImplicitSurface(fields::ellipsoid(1, 1, 1, 1)),
       [](std::mt19937_64& r) { return on_ellipsoid(r, 1, 1, 1, 1); }},
      {"ellipsoid H1", ImplicitSurface(fields::ellipsoid(1, 1.3, 0.8, 0.6)),
       [](std::mt19937_64& r) { return on_ellipsoid(r, 1, 1.3, 0.8, 0.6); }},
      {"cylinder H1", ImplicitSurface(fields::vertical_cylinder(1, 1.0)),
       [](std::mt19937_64& r) { return on_cylinder(r, 1, 1.0); }},
      {"sphere H2", ImplicitSurface(fields::ellipsoid(2, 1, 1, 1)),
       [](std::mt19937_64& r) { return on_ellipsoid(r, 2, 1, 1, 1); }},
      {"ellipsoid H2", ImplicitSurface(fields::ellipsoid(2, 0.9, 1.2, 0.7)),
       [](std::mt19937_64& r) { return on_ellipsoid(r, 2, 0.9, 1.2, 0.7); }},
  };
}

Eigen::MatrixXd restricted_C(const SurfaceGeometry& g) {
  return g.tau.transpose() * StructuralMatrix(g.n()).matrix() * g.tau;
}

}  // namespace

TEST_CASE("normal data at simple points") {
  const ImplicitSurface sphere(fields::ellipsoid(1, 1, 1, 1));
  const auto g = normal_data(sphere, pt({1, 0, 0}));
  CHECK((g.nu.components() - Eigen::Vector3d(1, 0, 0)).norm() < 1e-15);
  CHECK((g.nuH.components() - Eigen::Vector2d(1, 0)).norm() < 1e-15);
  CHECK(g.varpi == 0.0);
  CHECK_THROWS_AS(normal_data(sphere, pt({0, 0, 1})), CharacteristicPoint);
  try {
    normal_data(sphere, pt({0, 0, -1}));
  } catch (const CharacteristicPoint& e) {
    CHECK(e.pH_norm() == 0.0);
  }
  CHECK_THROWS_AS(normal_data(ImplicitSurface(fields::rho2_half(1)), Point::origin(1)), DegenerateGradient);

  std::mt19937_64 rng(1);
  const ImplicitSurface cyl(fields::vertical_cylinder(1, 1.0));
  for (int k = 0; k < 10; ++k) CHECK(normal_data(cyl, on_cylinder(rng, 1, 1.0)).varpi == 0.0);
}

TEST_CASE("adapted frame") {
  const ImplicitSurface sphere(fields::ellipsoid(1, 1, 1, 1));
  const auto g = surface_geometry(sphere, pt({1, 0, 0}));
  CHECK(g.tau.cols() == 1);
  CHECK((g.tau.col(0) - Eigen::Vector2d(0, 1)).norm() < 1e-15);
  std::mt19937_64 rng(2);
  for (const auto& c : cases()) {
    for (int k = 0; k < 20; ++k) {
      const auto geo = surface_geometry(c.surf, c.sample(rng));
      const int m = 2 * geo.n();
      CHECK(geo.tau.cols() == m - 1);
      CHECK((geo.tau.transpose() * geo.tau - Eigen::MatrixXd::Identity(m - 1, m - 1)).norm() < 1e-12);
      CHECK((geo.tau.transpose() * geo.nuH.components()).norm() < 1e-12);
      if (geo.n() == 1) CHECK(std::abs(std::abs(geo.tau.col(0).dot(geo.nuH_perp.components())) - 1) < 1e-12);
    }
  }
}

TEST_CASE("unit vertical cylinder has H_H = -1 with the outward normal") {
  std::mt19937_64 rng(3);
  const ImplicitSurface cyl(fields::vertical_cylinder(1, 1.0));
  for (int k = 0; k < 10; ++k) {
    const auto g = surface_geometry(cyl, on_cylinder(rng, 1, 1.0));
    CHECK(g.Hcurv == doctest::Approx(-1.0).epsilon(1e-12));
  }
  // flipping orientation flips the curvature
  const auto g = surface_geometry(ImplicitSurface(fields::vertical_cylinder(1, 1.0), -1), pt({0.6, 0.8, 0.3}));
  CHECK(g.Hcurv == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("skew part of B and trace identity") {
  std::mt19937_64 rng(4);
  for (const auto& c : cases()) {
    INFO(c.name);
    for (int k = 0; k < 50; ++k) {
      const auto g = surface_geometry(c.surf, c.sample(rng));
      const int n = g.n();
      const Eigen::MatrixXd M = restricted_C(g);
      CHECK((g.B - g.S_sym - g.A_skew).norm() < 1e-14);
      CHECK(std::abs(g.B.trace() - g.Hcurv) < 1e-14);
      const double scale = std::max(1.0, std::abs(g.varpi));
      CHECK((g.A_skew - 0.5 * g.varpi * M).cwiseAbs().maxCoeff() < 1e-8 * scale);
      CHECK(std::abs(g.A_skew.squaredNorm() - 0.5 * (n - 1) * g.varpi * g.varpi) < 1e-8 * scale * scale);
      const Eigen::VectorXd w = g.tau.transpose() * g.nuH_perp.components();
      CHECK((g.A_skew * w).norm() < 1e-8 * scale);
      // Tr B(., C .) = sum_a B(tau_a, P C tau_a)
      const double tr = g.B.cwiseProduct(M).sum();
      CHECK(std::abs(tr - (n - 1) * g.varpi) < 1e-8 * scale);
      if (n == 1) CHECK(g.A_skew.norm() == 0.0);
    }
  }
}

TEST_CASE("gauge invariance under re-choice of the tangent frame") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> nd;
  const ImplicitSurface s(fields::ellipsoid(2, 0.9, 1.2, 0.7));
  const ScalarField phi = parse_polynomial("x1^2*y2 + t*x2 - y1", 2);
  for (int k = 0; k < 10; ++k) {
    const auto g = surface_geometry(s, on_ellipsoid(rng, 2, 0.9, 1.2, 0.7));
    Eigen::MatrixXd R(3, 3);
    for (int i = 0; i < 9; ++i) R(i / 3, i % 3) = nd(rng);
    const Eigen::MatrixXd Q = Eigen::HouseholderQR<Eigen::MatrixXd>(R).householderQ();
    SurfaceGeometry h = g;
    h.tau = g.tau * Q;
    h.B = -h.tau.transpose() * h.J.leftCols(4) * h.tau;
    h.S_sym = 0.5 * (h.B + h.B.transpose());
    h.A_skew = 0.5 * (h.B - h.B.transpose());
    CHECK(std::abs(h.B.trace() - g.Hcurv) < 1e-12);
    CHECK(std::abs(h.S_sym.squaredNorm() - g.S_sym.squaredNorm()) < 1e-10);
    CHECK(std::abs(h.A_skew.squaredNorm() - g.A_skew.squaredNorm()) < 1e-10);
    const auto t = tangential_ops(s, g, phi);
    const Eigen::VectorXd v = t.gradHS.components();
    const Eigen::VectorXd a = g.tau.transpose() * v, b = h.tau.transpose() * v;
    CHECK(std::abs(a.dot(g.S_sym * a) - b.dot(h.S_sym * b)) < 1e-10);
    h.Hcurv = h.B.trace();
    const auto th = tangential_ops(h, frame_jet(phi, h.p));
    CHECK(std::abs(th.lapHS_intrinsic - t.lapHS_intrinsic) < 1e-10);
  }
}

TEST_CASE("Laplacian on the surface two ways") {
  std::mt19937_64 rng(6);
  const std::vector<ScalarField> phis{fields::rho2_half(1), fields::two_t(1), fields::x1y1t(1),
                                      fields::exp_cos(1), parse_polynomial("x^3 - y*t^2 + 2*x*y", 1)};
  for (const auto& c : cases()) {
    const int n = c.surf.n();
    for (int k = 0; k < 20; ++k) {
      const auto g = surface_geometry(c.surf, c.sample(rng));
      for (const auto& phi1 : phis) {
        const ScalarField phi = n == 1 ? phi1 : parse_polynomial("x1^2*y2 + t*x2 - y1*t^2 + x1*y1", 2);
        const auto t = tangential_ops(c.surf, g, phi);
        CHECK(std::abs(t.lapHS - t.lapHS_intrinsic) < 1e-8 * std::max(1.0, std::abs(t.lapHS)));
        // same value as the divergence of the tangential gradient extension
        const double d = div_hs(g, HorizontalField::tangential_gradient(c.surf, phi));
        CHECK(std::abs(d - t.lapHS) < 1e-8 * std::max(1.0, std::abs(d)));
      }
    }
  }
}

TEST_CASE("closed forms for the corollary test functions") {
  std::mt19937_64 rng(7);
  for (const auto& c : cases()) {
    const int n = c.surf.n();
    Eigen::VectorXd V = Eigen::VectorXd::LinSpaced(2 * n, 1.0, -0.5);
    for (int k = 0; k < 20; ++k) {
      const auto g = surface_geometry(c.surf, c.sample(rng));
      const Eigen::VectorXd& nu = g.nuH.components();
      const Eigen::VectorXd& np = g.nuH_perp.components();
      const auto lin = tangential_ops(c.surf, g, fields::linear_horizontal(V));
      CHECK(lin.lapHS == doctest::Approx(g.Hcurv * V.dot(nu)).epsilon(1e-10));
      CHECK(lin.Lhs == doctest::Approx(g.Hcurv * V.dot(nu) - g.varpi * V.dot(np)).epsilon(1e-10));
      const auto rho = tangential_ops(c.surf, g, fields::rho2_half(n));
      CHECK(rho.lapHS == doctest::Approx((2 * n - 1) + g.Hcurv * g.p.z.dot(nu)).epsilon(1e-10));
      const auto cst = tangential_ops(c.surf, g, fields::constant(n, 4.0));
      CHECK(cst.gradHS.norm() == 0.0);
      CHECK(cst.lapHS == 0.0);
      CHECK(cst.Lhs == 0.0);
      CHECK(div_hs(g, HorizontalField::tangential_gradient(c.surf, fields::linear_horizontal(V))) ==
            doctest::Approx(g.Hcurv * V.dot(nu)).epsilon(1e-10));
    }
  }
}

TEST_CASE("divergence of the perpendicular normal") {
  std::mt19937_64 rng(8);
  for (const auto& c : cases()) {
    const int n = c.surf.n();
    const HorizontalField X = HorizontalField::normal_perp(c.surf);
    for (int k = 0; k < 20; ++k) {
      const auto g = surface_geometry(c.surf, c.sample(rng));
      const double d = div_hs(g, X);
      CHECK(std::abs(d + (n - 1) * g.varpi) < 1e-8 * std::max(1.0, std::abs(g.varpi)));
    }
  }
  const ImplicitSurface sphere(fields::ellipsoid(1, 1, 1, 1));
  const auto g = surface_geometry(sphere, pt({0.6, 0, 0.8}));
  CHECK_THROWS_AS(div_hs(g, HorizontalField::constant(Eigen::Vector2d(1, 0))), NotTangent);
  CHECK_NOTHROW(div_hs(g, HorizontalField::constant(Eigen::Vector2d(1, 0)), false));
}

TEST_CASE("normalized defining function") {
  std::mt19937_64 rng(9);
  for (const auto& c : cases()) {
    const ImplicitSurface ns = normalize_defining(c.surf);
    CHECK(ns.f().max_order() == 2);
    for (int k = 0; k < 20; ++k) {
      const Point p = c.sample(rng);
      const auto h = horizontal_ops(ns.f(), p);
      CHECK(std::abs(h.gradH.norm() - 1.0) < 1e-8);
      CHECK(std::abs(ns.f().value(p)) < 1e-12);
      // the two defining functions give the same geometry on S
      const auto a = surface_geometry(c.surf, p);
      const auto b = surface_geometry(ns, p);
      CHECK(std::abs(a.Hcurv - b.Hcurv) < 1e-8 * std::max(1.0, std::abs(a.Hcurv)));
      CHECK(std::abs(a.varpi - b.varpi) < 1e-8 * std::max(1.0, std::abs(a.varpi)));
    }
  }
  const ImplicitSurface cyl(fields::vertical_cylinder(1, 1.0));
  const Point p = pt({0.3, 0.4, 1.0});
  CHECK(normalize_defining(cyl).f().value(p) == doctest::Approx((0.25 - 1.0) / (2 * 0.5)));
  CHECK_THROWS_AS(normalize_defining(cyl).f().jet(p, 3), UnsupportedOrder);
  CHECK_THROWS_AS(normalize_defining(ImplicitSurface(fields::two_t(1))).f().value(Point::origin(1)),
                  HorizontalGradientVanishes);
}

TEST_CASE("derivative of the normal along itself") {
  std::mt19937_64 rng(10);
  const ImplicitSurface cyl(fields::vertical_cylinder(1, 1.0));
  CHECK(nabla_nu_check(cyl, surface_geometry(cyl, on_cylinder(rng, 1, 1))) < 1e-10);
  const ImplicitSurface sphere(fields::ellipsoid(1, 1, 1, 1));
  CHECK(nabla_nu_check(sphere, surface_geometry(sphere, pt({0.6, 0.8, 0}))) < 1e-10);
  for (const auto& c : cases()) {
    for (int k = 0; k < 20; ++k) {
      const auto g = surface_geometry(c.surf, c.sample(rng));
      CHECK(nabla_nu_check(c.surf, g) < 1e-8 * std::max(1.0, std::abs(g.varpi)));
    }
  }
}

TEST_CASE("invariants are constant on rotation orbits") {
  const ImplicitSurface s(fields::ellipsoid(1, 1, 1, 0.7));
  const auto a = surface_geometry(s, pt({0.8, 0.0, 0.42}));
  for (double th : {0.3, 1.7, 4.0}) {
    const auto b = surface_geometry(s, pt({0.8 * std::cos(th), 0.8 * std::sin(th), 0.42}));
    CHECK(b.varpi == doctest::Approx(a.varpi).epsilon(1e-12));
    CHECK(b.Hcurv == doctest::Approx(a.Hcurv).epsilon(1e-12));
  }
}
