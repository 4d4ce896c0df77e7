#include <doctest.h>

#include "heisenberg/field.hpp"
#include "heisenberg/jet.hpp"

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
}  // namespace

TEST_CASE("monomial counts") {
  // binomial(dim + order, order)
  const auto& L = MonomialLayout::get(3);
  CHECK(L.size(0) == 1);
  CHECK(L.size(1) == 4);
  CHECK(L.size(2) == 10);
  CHECK(L.size(3) == 20);
  CHECK(MonomialLayout::get(5).size(3) == 56);
}

TEST_CASE("catalog jets") {
  const Jet a = jet_eval(fields::x1_squared(1), pt({1, 0, 0}), 2);
  CHECK(a.value() == 1.0);
  CHECK(a.d(0) == 2.0);
  CHECK(a.d(0, 0) == 2.0);
  CHECK(a.d(1) == 0.0);
  CHECK(a.d(0, 2) == 0.0);

  const Jet b = jet_eval(fields::two_t(1), pt({0.4, -3, 9}), 1);
  CHECK(b.d(2) == 2.0);
  CHECK(b.d(0) == 0.0);

  const Jet c = jet_eval(fields::x1y1t(1), pt({1, 1, 1}), 3);
  CHECK(c.d(0, 1, 2) == 1.0);
  CHECK(c.d(2, 1, 0) == 1.0);
  CHECK(c.d(0, 0, 1) == 0.0);
}

TEST_CASE("order range") {
  CHECK_THROWS_AS(jet_eval(fields::two_t(1), Point::origin(1), 0), UnsupportedOrder);
  CHECK_THROWS_AS(jet_eval(fields::two_t(1), Point::origin(1), 4), UnsupportedOrder);
}

TEST_CASE("transcendental jets match closed forms") {
  const double x = 0.3, y = -0.7;
  const Jet j = jet_eval(fields::exp_cos(1), pt({x, y, 0.2}), 3);
  CHECK(j.value() == doctest::Approx(std::exp(x) * std::cos(y)).epsilon(1e-15));
  CHECK(j.d(0, 1) == doctest::Approx(-std::exp(x) * std::sin(y)).epsilon(1e-14));
  CHECK(j.d(1, 1, 1) == doctest::Approx(std::exp(x) * std::sin(y)).epsilon(1e-14));
  CHECK(j.d(0, 0, 0) == doctest::Approx(std::exp(x) * std::cos(y)).epsilon(1e-14));

  const Jet r = jet_eval(fields::cylinder_distance(1, 1.0), pt({0.6, 0.8, 0}), 3);
  // rho = sqrt(x^2+y^2): d_xx = y^2/rho^3, d_xxx = -3 x y^2 / rho^5
  CHECK(r.d(0, 0) == doctest::Approx(0.64).epsilon(1e-14));
  CHECK(r.d(0, 0, 0) == doctest::Approx(-3 * 0.6 * 0.64).epsilon(1e-13));
}

TEST_CASE("division and log roundtrip") {
  const Point p = pt({0.5, 0.2, 0.1, -0.4, 0.3});
  const auto x = coordinate_jets(p, 3);
  const Jet g = exp(x[0]) * (x[1] + 2.0) + x[4] * x[2];
  const Jet back = log(exp(g));
  const Jet one = g / g;
  for (int i = 0; i < g.size(); ++i) {
    CHECK(back.coeff(i) == doctest::Approx(g.coeff(i)).epsilon(1e-13));
    CHECK(one.coeff(i) == doctest::Approx(i == 0 ? 1.0 : 0.0).epsilon(1e-13));
  }
  const Jet s = sqrt(g * g);
  for (int i = 0; i < g.size(); ++i) CHECK(s.coeff(i) == doctest::Approx(g.coeff(i)).epsilon(1e-13));
}

TEST_CASE("compose matches direct evaluation") {
  // Derived fields go through compose; results must agree with the expression path.
  const ScalarField f = fields::torus(1, 2.0, 0.5);
  const ScalarField derived("wrapped", 1, [f](const Point& p, int order) { return f.jet(p, order); });
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.5, 1.5);
  for (int k = 0; k < 10; ++k) {
    // coordinates driven by two parameters (a, b) through a nonlinear map
    const double a0 = u(rng), b0 = u(rng);
    std::vector<Jet> ab{Jet::variable(2, 3, 0, a0), Jet::variable(2, 3, 1, b0)};
    std::vector<Jet> coords{cos(ab[0]) * ab[1] + 1.0, sin(ab[0]) * ab[1], ab[0] * ab[1]};
    const Jet direct = f.compose(coords);
    const Jet via = derived.compose(coords);
    for (int i = 0; i < direct.size(); ++i)
      CHECK(via.coeff(i) == doctest::Approx(direct.coeff(i)).epsilon(1e-12));
  }
}

TEST_CASE("polynomial parser") {
  const ScalarField f = parse_polynomial("x1^2 - 0.5*x1*y1*t + 2", 1);
  const Jet j = jet_eval(f, pt({1, 2, 3}), 3);
  CHECK(j.value() == doctest::Approx(1 - 3 + 2));
  CHECK(j.d(0, 1, 2) == doctest::Approx(-0.5));
  CHECK_THROWS_AS(parse_polynomial("3 x^2", 1), PolynomialParseError);
  const ScalarField h = parse_polynomial("x*y + 1e-1*t", 1);
  CHECK(h.value(pt({2, 3, 10})) == doctest::Approx(7.0));
  CHECK(parse_polynomial("y2*x2", 2).value(pt({0, 0, 2, 3, 0})) == doctest::Approx(6.0));
  CHECK_THROWS_AS(parse_polynomial("x3", 2), PolynomialParseError);
  CHECK_THROWS_AS(parse_polynomial("x +* y", 1), PolynomialParseError);
  CHECK_THROWS_AS(parse_polynomial("", 1), PolynomialParseError);
  CHECK_THROWS_AS(parse_polynomial("z", 1), PolynomialParseError);
}
