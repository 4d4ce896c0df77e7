#include <doctest.h>

#include "heisenberg/frame.hpp"

#include <cmath>
#include <random>

using namespace heis;

namespace {
Point pt(std::initializer_list<double> c) {
  Eigen::VectorXd v(c.size());
  int i = 0;
  for (double x : c) v[i++] = x;
  return Point::from_coords(v);
}

Point random_point(std::mt19937_64& rng, int n, double s = 1.5) {
  std::uniform_real_distribution<double> u(-s, s);
  Eigen::VectorXd c(2 * n + 1);
  for (auto& v : c) v = u(rng);
  return Point::from_coords(c);
}

// Random cubic polynomial with coefficients in [-1, 1].
ScalarField random_cubic(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const int d = 2 * n + 1;
  std::vector<std::array<int, 3>> idx;
  std::vector<double> coef;
  for (int a = -1; a < d; ++a)
    for (int b = a; b < d; ++b)
      for (int c = b; c < d; ++c) {
        idx.push_back({a, b, c});
        coef.push_back(u(rng));
      }
  return ScalarField::from_expression("cubic", n, [idx, coef](std::span<const Jet> x) {
    Jet out = x[0] * 0.0;
    for (std::size_t k = 0; k < idx.size(); ++k) {
      Jet m = x[0] * 0.0 + coef[k];
      for (int v : idx[k])
        if (v >= 0) m = m * x[v];
      out += m;
    }
    return out;
  });
}
}  // namespace

TEST_CASE("frame jet of 2t") {
  const Point p = pt({0.7, -1.1, 3.0});
  const FrameJet fj = frame_jet(fields::two_t(1), p);
  CHECK(fj.d1[0] == doctest::Approx(1.1));
  CHECK(fj.d1[1] == doctest::Approx(0.7));
  CHECK(fj.d1[2] == 2.0);
  const auto ops = horizontal_ops(fj);
  CHECK((ops.hessH + StructuralMatrix(1).matrix()).norm() == 0.0);
  CHECK(ops.lapH == 0.0);
  const auto split = hessian_split(ops.hessH, ops.Tphi);
  CHECK(split.sym.norm() == 0.0);
  CHECK((split.skew + StructuralMatrix(1).matrix()).norm() == 0.0);
}

TEST_CASE("closed forms from the corollary test functions") {
  std::mt19937_64 rng(1);
  for (int n : {1, 2}) {
    for (int k = 0; k < 10; ++k) {
      const Point p = random_point(rng, n);
      const auto rho = horizontal_ops(fields::rho2_half(n), p);
      CHECK(rho.lapH == 2.0 * n);
      CHECK(rho.hessH.isIdentity(0.0));
      CHECK(rho.Tphi == 0.0);
      // grad_H(rho^2/2) = x_H
      CHECK((rho.gradH.components() - p.z).norm() < 1e-15);

      Eigen::VectorXd V = Eigen::VectorXd::LinSpaced(2 * n, -1.0, 2.0);
      const auto lin = horizontal_ops(fields::linear_horizontal(V), p);
      CHECK(lin.hessH.norm() == 0.0);
      CHECK((lin.gradH.components() - V).norm() == 0.0);

      const auto tt = horizontal_ops(fields::two_t(n), p);
      CHECK((tt.gradH.components() - perp(p.z)).norm() < 1e-15);
    }
  }
}

TEST_CASE("x1 y1 at the origin") {
  const auto ops = horizontal_ops(parse_polynomial("x1*y1", 1), Point::origin(1));
  CHECK(ops.hessH(0, 1) == 1.0);
  CHECK(ops.hessH(1, 0) == 1.0);
  CHECK(ops.hessH(0, 0) == 0.0);
}

TEST_CASE("commutator [X_i, Y_i] = T and the skew part of the Hessian") {
  std::mt19937_64 rng(2);
  for (int n : {1, 2}) {
    for (int k = 0; k < 20; ++k) {
      const ScalarField phi = random_cubic(rng, n);
      const Point p = random_point(rng, n);
      const FrameJet fj = frame_jet(phi, p);
      const double T = fj.d1.vertical();
      for (int i = 0; i < n; ++i) {
        // X(Y phi) - Y(X phi) = d2(Y, X) - d2(X, Y)
        CHECK(fj.d2(2 * i + 1, 2 * i) - fj.d2(2 * i, 2 * i + 1) ==
              doctest::Approx(T).epsilon(1e-12));
      }
      for (int i = 0; i < 2 * n; ++i)
        for (int j = 0; j < 2 * n; ++j)
          if (j / 2 != i / 2) CHECK(std::abs(fj.d2(i, j) - fj.d2(j, i)) < 1e-12);
      const auto ops = horizontal_ops(fj);
      const auto split = hessian_split(ops.hessH, ops.Tphi);
      CHECK(std::abs(ops.hessH.squaredNorm() - split.gramSym - 0.5 * n * T * T) <
            1e-12 * std::max(1.0, ops.hessH.squaredNorm()));
    }
  }
}

TEST_CASE("hessian_split rejects an inconsistent skew part") {
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(2, 2);
  H(0, 1) = 1.0;
  CHECK_THROWS_AS(hessian_split(H, 0.0), HessianSkewMismatch);
  CHECK_NOTHROW(hessian_split(H, -1.0));
}

TEST_CASE("frame derivatives are left invariant") {
  std::mt19937_64 rng(4);
  for (int n : {1, 2}) {
    const ScalarField phi = random_cubic(rng, n);
    const Point q = random_point(rng, n);
    // psi = phi o L_q, evaluated through the group law on jets
    const ScalarField psi = ScalarField::from_expression("translated", n, [phi, q, n](std::span<const Jet> x) {
      std::vector<Jet> y;
      Jet sympl = x[0] * 0.0;
      for (int i = 0; i < n; ++i) {
        sympl += x[2 * i + 1] * q.z[2 * i] - x[2 * i] * q.z[2 * i + 1];
      }
      for (int k = 0; k < 2 * n; ++k) y.push_back(x[k] + q.z[k]);
      y.push_back(x[2 * n] + q.t + sympl * 0.5);
      return phi.compose(y);
    });
    for (int k = 0; k < 5; ++k) {
      const Point p = random_point(rng, n);
      const FrameJet a = frame_jet(psi, p);
      const FrameJet b = frame_jet(phi, group_mul(q, p));
      CHECK((a.d1.components() - b.d1.components()).norm() < 1e-10);
      CHECK((a.d2 - b.d2).norm() < 1e-10);
    }
  }
}

TEST_CASE("finite-difference oracle") {
  std::mt19937_64 rng(6);
  CHECK(fd_crosscheck(fields::constant(1, 3.0), pt({0.1, 0.2, 0.3})) == 0.0);
  const ScalarField e = ScalarField::from_expression(
      "exp(x+t)", 1, [](std::span<const Jet> x) { return exp(x[0] + x[2]); });
  for (int k = 0; k < 20; ++k) {
    CHECK(fd_crosscheck(e, random_point(rng, 1, 1.0)) <= 1e-6);
    CHECK(fd_crosscheck(random_cubic(rng, 2), random_point(rng, 2)) <= 1e-6);
  }
}

TEST_CASE("Bochner-type formula") {
  std::mt19937_64 rng(8);
  for (int n : {1, 2}) {
    for (int k = 0; k < 10; ++k) {
      const ScalarField phi = random_cubic(rng, n);
      const Point p = random_point(rng, n);
      const auto s = bochner_sides(phi, p);
      CHECK(std::abs(s.lhs - s.rhs) <= 1e-9 * std::max(1.0, std::abs(s.lhs)));
    }
    const auto s = bochner_sides(fields::exp_cos(n), random_point(rng, n));
    CHECK(std::abs(s.lhs - s.rhs) <= 1e-9 * std::max(1.0, std::abs(s.lhs)));
    const auto c = bochner_sides(fields::constant(n, 2.0), random_point(rng, n));
    CHECK(c.lhs == 0.0);
    CHECK(c.rhs == 0.0);
  }
}
