#include "heisenberg/field.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <map>

namespace heis {

ScalarField::ScalarField(std::string label, int n, JetFunction jet)
    : label_(std::move(label)), n_(n), jet_(std::move(jet)) {}

ScalarField ScalarField::from_expression(std::string label, int n, Expression expr) {
  ScalarField f;
  f.label_ = std::move(label);
  f.n_ = n;
  f.expr_ = std::move(expr);
  return f;
}

std::vector<Jet> coordinate_jets(const Point& p, int order) {
  const int d = p.dim();
  std::vector<Jet> out;
  out.reserve(d);
  for (int k = 0; k < d - 1; ++k) out.push_back(Jet::variable(d, order, k, p.z[k]));
  out.push_back(Jet::variable(d, order, d - 1, p.t));
  return out;
}

Jet ScalarField::jet(const Point& p, int order) const {
  if (order < 0 || order > max_order_) throw UnsupportedOrder(order);
  if (p.n() != n_)
    throw DimensionMismatch("field '" + label_ + "' lives on H^" + std::to_string(n_) +
                            ", point on H^" + std::to_string(p.n()));
  if (expr_) {
    const auto coords = coordinate_jets(p, order);
    return expr_(coords);
  }
  return jet_(p, order);
}

Jet ScalarField::compose(std::span<const Jet> coords) const {
  if (static_cast<int>(coords.size()) != 2 * n_ + 1)
    throw DimensionMismatch("field '" + label_ + "': expected " + std::to_string(2 * n_ + 1) +
                            " coordinate jets");
  if (expr_) return expr_(coords);
  Eigen::VectorXd base(coords.size());
  std::vector<Jet> disp;
  disp.reserve(coords.size());
  int order = kMaxJetOrder;
  for (std::size_t k = 0; k < coords.size(); ++k) {
    base[static_cast<Eigen::Index>(k)] = coords[k].value();
    disp.push_back(coords[k].displacement());
    order = std::min(order, coords[k].order());
  }
  const Jet outer = jet(Point::from_coords(base), order);
  return heis::compose(outer, disp);
}

Jet jet_eval(const ScalarField& field, const Point& p, int order) {
  if (order < 1 || order > kMaxJetOrder) throw UnsupportedOrder(order);
  return field.jet(p, order);
}

ScalarField scale(const ScalarField& f, double s) {
  return ScalarField(std::to_string(s) + "*" + f.label(), f.n(),
                     [f, s](const Point& p, int order) { return f.jet(p, order) * s; })
      .with_max_order(f.max_order());
}

PolynomialParseError::PolynomialParseError(const std::string& text, std::size_t pos,
                                           const std::string& why)
    : std::invalid_argument("cannot parse polynomial '" + text + "' at column " +
                            std::to_string(pos + 1) + ": " + why),
      pos_(pos) {}

namespace {

struct Monomial {
  double coef = 1.0;
  std::vector<int> exps;
};

class PolynomialParser {
 public:
  PolynomialParser(const std::string& text, int n) : s_(text), n_(n) {}

  std::vector<Monomial> parse() {
    std::vector<Monomial> terms;
    skip_ws();
    if (pos_ >= s_.size()) fail("empty polynomial");
    bool first = true;
    while (pos_ < s_.size()) {
      double sign = 1.0;
      if (peek() == '+' || peek() == '-') {
        sign = (peek() == '-') ? -1.0 : 1.0;
        ++pos_;
        skip_ws();
      } else if (!first) {
        fail("expected '+' or '-'");
      }
      Monomial m = term();
      m.coef *= sign;
      terms.push_back(std::move(m));
      first = false;
      skip_ws();
    }
    return terms;
  }

 private:
  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  [[noreturn]] void fail(const std::string& why) const { throw PolynomialParseError(s_, pos_, why); }

  Monomial term() {
    Monomial m;
    m.exps.assign(2 * n_ + 1, 0);
    factor(m);
    skip_ws();
    while (peek() == '*') {
      ++pos_;
      skip_ws();
      factor(m);
      skip_ws();
    }
    return m;
  }

  void factor(Monomial& m) {
    if (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '.') {
      const char* begin = s_.c_str() + pos_;
      char* end = nullptr;
      const double v = std::strtod(begin, &end);
      if (end == begin) fail("bad number");
      pos_ += static_cast<std::size_t>(end - begin);
      m.coef *= v;
      return;
    }
    const int var = variable();
    int power = 1;
    skip_ws();
    if (peek() == '^') {
      ++pos_;
      skip_ws();
      const std::size_t start = pos_;
      while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
      if (start == pos_) fail("expected integer exponent");
      power = std::stoi(s_.substr(start, pos_ - start));
    }
    m.exps[var] += power;
  }

  int variable() {
    const char c = peek();
    if (c == 't') {
      ++pos_;
      return 2 * n_;
    }
    if (c != 'x' && c != 'y') fail("expected a number or one of x_i, y_i, t");
    ++pos_;
    int idx = 1;
    const std::size_t start = pos_;
    while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
    if (pos_ > start) idx = std::stoi(s_.substr(start, pos_ - start));
    if (idx < 1 || idx > n_) fail("variable index out of range for H^" + std::to_string(n_));
    return 2 * (idx - 1) + (c == 'y' ? 1 : 0);
  }

  const std::string& s_;
  int n_;
  std::size_t pos_ = 0;
};

Jet power_of(const Jet& x, int e) {
  Jet out = Jet::constant(x.dim(), x.order(), 1.0);
  for (int i = 0; i < e; ++i) out = out * x;
  return out;
}

}  // namespace

ScalarField parse_polynomial(const std::string& text, int n) {
  auto terms = PolynomialParser(text, n).parse();
  return ScalarField::from_expression(
      text, n, [terms = std::move(terms)](std::span<const Jet> x) {
        Jet out = x[0] * 0.0;
        for (const auto& m : terms) {
          Jet term = Jet::constant(x[0].dim(), x[0].order(), m.coef);
          for (std::size_t k = 0; k < m.exps.size(); ++k)
            if (m.exps[k] > 0) term = term * power_of(x[k], m.exps[k]);
          out += term;
        }
        return out;
      });
}

namespace fields {

namespace {
Jet zero_like(std::span<const Jet> x) { return x[0] * 0.0; }

Jet horizontal_norm_sq(std::span<const Jet> x) {
  Jet out = zero_like(x);
  for (std::size_t k = 0; k + 1 < x.size(); ++k) out += x[k] * x[k];
  return out;
}

std::string fmt_num(double v) {
  std::string s = std::to_string(v);
  while (!s.empty() && s.back() == '0') s.pop_back();
  if (!s.empty() && s.back() == '.') s.pop_back();
  return s;
}
}  // namespace

ScalarField coordinate(int n, int k) {
  if (k < 0 || k > 2 * n) throw std::out_of_range("coordinate index out of range");
  return ScalarField::from_expression("coordinate(" + std::to_string(k) + ")", n,
                                      [k](std::span<const Jet> x) { return x[k]; });
}

ScalarField rho2_half(int n) {
  return ScalarField::from_expression(
      "rho2_half", n, [](std::span<const Jet> x) { return horizontal_norm_sq(x) * 0.5; });
}

ScalarField two_t(int n) {
  return ScalarField::from_expression("two_t", n,
                                      [](std::span<const Jet> x) { return x.back() * 2.0; });
}

ScalarField linear_horizontal(const Eigen::VectorXd& V) {
  if (V.size() % 2 != 0 || V.size() == 0)
    throw DimensionMismatch("linear_horizontal: V must have length 2n");
  std::string label = "linear_horizontal(";
  for (Eigen::Index i = 0; i < V.size(); ++i) label += (i ? "," : "") + fmt_num(V[i]);
  label += ")";
  return ScalarField::from_expression(label, static_cast<int>(V.size()) / 2,
                                      [V](std::span<const Jet> x) {
                                        Jet out = zero_like(x);
                                        for (Eigen::Index i = 0; i < V.size(); ++i)
                                          out += x[i] * V[i];
                                        return out;
                                      });
}

ScalarField euclidean_sphere(const Eigen::VectorXd& center, double r) {
  if (center.size() % 2 != 1) throw DimensionMismatch("euclidean_sphere: center needs 2n+1 entries");
  std::string label = "euclidean_sphere(";
  for (Eigen::Index i = 0; i < center.size(); ++i) label += fmt_num(center[i]) + ",";
  label += fmt_num(r) + ")";
  return ScalarField::from_expression(label, static_cast<int>(center.size()) / 2,
                                      [center, r](std::span<const Jet> x) {
                                        Jet out = zero_like(x) - r * r;
                                        for (std::size_t k = 0; k < x.size(); ++k) {
                                          Jet d = x[k] - center[static_cast<Eigen::Index>(k)];
                                          out += d * d;
                                        }
                                        return out;
                                      });
}

ScalarField ellipsoid(int n, double a, double b, double c) {
  return ScalarField::from_expression(
      "ellipsoid(" + fmt_num(a) + "," + fmt_num(b) + "," + fmt_num(c) + ")", n,
      [n, a, b, c](std::span<const Jet> x) {
        Jet out = x[2 * n] * x[2 * n] / (c * c) - 1.0;
        for (int i = 0; i < n; ++i) {
          out += x[2 * i] * x[2 * i] / (a * a);
          out += x[2 * i + 1] * x[2 * i + 1] / (b * b);
        }
        return out;
      });
}

ScalarField torus(int n, double R, double r) {
  return ScalarField::from_expression("torus(" + fmt_num(R) + "," + fmt_num(r) + ")", n,
                                      [R, r](std::span<const Jet> x) {
                                        Jet rho = sqrt(horizontal_norm_sq(x)) - R;
                                        return rho * rho + x.back() * x.back() - r * r;
                                      });
}

ScalarField vertical_cylinder(int n, double r) {
  return ScalarField::from_expression("vertical_cylinder(" + fmt_num(r) + ")", n,
                                      [r](std::span<const Jet> x) {
                                        return horizontal_norm_sq(x) - r * r;
                                      });
}

ScalarField cylinder_distance(int n, double r) {
  return ScalarField::from_expression("cylinder_distance(" + fmt_num(r) + ")", n,
                                      [r](std::span<const Jet> x) {
                                        return sqrt(horizontal_norm_sq(x)) - r;
                                      });
}

ScalarField x1_squared(int n) {
  return ScalarField::from_expression("x1_squared", n,
                                      [](std::span<const Jet> x) { return x[0] * x[0]; });
}

ScalarField x1y1t(int n) {
  return ScalarField::from_expression(
      "x1y1t", n, [](std::span<const Jet> x) { return x[0] * x[1] * x.back(); });
}

ScalarField exp_cos(int n) {
  return ScalarField::from_expression(
      "exp_cos", n, [](std::span<const Jet> x) { return exp(x[0]) * cos(x[1]); });
}

ScalarField constant(int n, double c) {
  return ScalarField::from_expression("constant(" + fmt_num(c) + ")", n,
                                      [c](std::span<const Jet> x) { return zero_like(x) + c; });
}

}  // namespace fields
}  // namespace heis
