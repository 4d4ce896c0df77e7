#include "heisenberg/jet.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>

namespace heis {

UnsupportedOrder::UnsupportedOrder(int order)
    : std::invalid_argument("jet order " + std::to_string(order) + " unsupported (max " +
                            std::to_string(kMaxJetOrder) + ")") {}

namespace {

std::uint64_t encode(std::span<const int> e) {
  std::uint64_t key = 0;
  for (int v : e) key = key * (kMaxJetOrder + 1) + static_cast<std::uint64_t>(v);
  return key;
}

void enumerate_degree(int dim, int remaining, int pos, std::vector<int>& cur,
                      std::vector<std::vector<int>>& out) {
  if (pos == dim - 1) {
    cur[pos] = remaining;
    out.push_back(cur);
    return;
  }
  for (int v = remaining; v >= 0; --v) {
    cur[pos] = v;
    enumerate_degree(dim, remaining - v, pos + 1, cur, out);
  }
}

constexpr double kFactorial[] = {1.0, 1.0, 2.0, 6.0, 24.0};

}  // namespace

MonomialLayout::MonomialLayout(int dim) : dim_(dim) {
  std::vector<std::vector<int>> monos;
  for (int deg = 0; deg <= kMaxJetOrder; ++deg) {
    std::vector<int> cur(dim, 0);
    enumerate_degree(dim, deg, 0, cur, monos);
    count_[deg] = static_cast<int>(monos.size());
  }
  const int total = static_cast<int>(monos.size());
  std::unordered_map<std::uint64_t, int> lookup;
  exps_.reserve(static_cast<std::size_t>(total) * dim);
  for (int i = 0; i < total; ++i) {
    int deg = 0;
    for (int v : monos[i]) {
      exps_.push_back(static_cast<std::uint8_t>(v));
      deg += v;
    }
    degree_.push_back(deg);
    lookup.emplace(encode(monos[i]), i);
  }
  raise_.assign(static_cast<std::size_t>(total) * dim, -1);
  lower_.assign(static_cast<std::size_t>(total) * dim, -1);
  for (int i = 0; i < total; ++i) {
    for (int k = 0; k < dim; ++k) {
      std::vector<int> m = monos[i];
      if (degree_[i] < kMaxJetOrder) {
        ++m[k];
        raise_[i * dim + k] = lookup.at(encode(m));
        --m[k];
      }
      if (m[k] > 0) {
        --m[k];
        lower_[i * dim + k] = lookup.at(encode(m));
      }
    }
  }
  for (int a = 0; a < total; ++a) {
    for (int b = 0; b < total; ++b) {
      if (degree_[a] + degree_[b] > kMaxJetOrder) continue;
      std::vector<int> m(dim);
      for (int k = 0; k < dim; ++k) m[k] = monos[a][k] + monos[b][k];
      products_.push_back({a, b, lookup.at(encode(m))});
    }
  }
  std::stable_sort(products_.begin(), products_.end(), [this](const Product& x, const Product& y) {
    return degree_[x.c] < degree_[y.c];
  });
  for (int order = 0; order <= kMaxJetOrder; ++order) {
    product_count_[order] = static_cast<int>(
        std::count_if(products_.begin(), products_.end(),
                      [&](const Product& p) { return degree_[p.c] <= order; }));
  }
}

const MonomialLayout& MonomialLayout::get(int dim) {
  static std::array<std::unique_ptr<MonomialLayout>, kMaxJetDim + 1> table;
  static std::array<std::once_flag, kMaxJetDim + 1> flags;
  if (dim < 1 || dim > kMaxJetDim)
    throw std::invalid_argument("MonomialLayout: dimension " + std::to_string(dim) +
                                " out of range");
  std::call_once(flags[dim], [dim] { table[dim].reset(new MonomialLayout(dim)); });
  return *table[dim];
}

int MonomialLayout::index_of(std::span<const int> exps) const {
  if (static_cast<int>(exps.size()) != dim_)
    throw std::invalid_argument("MonomialLayout::index_of: multi-index length mismatch");
  int deg = 0;
  for (int v : exps) {
    if (v < 0) throw std::invalid_argument("MonomialLayout::index_of: negative exponent");
    deg += v;
  }
  if (deg > kMaxJetOrder) throw UnsupportedOrder(deg);
  for (int i = (deg == 0 ? 0 : count_[deg - 1]); i < count_[deg]; ++i) {
    auto e = exponents(i);
    if (std::equal(e.begin(), e.end(), exps.begin(), [](std::uint8_t a, int b) { return a == b; }))
      return i;
  }
  throw std::logic_error("MonomialLayout::index_of: monomial not found");
}

Jet::Jet(const MonomialLayout* layout, int order)
    : layout_(layout), order_(order), c_(static_cast<std::size_t>(layout->size(order)), 0.0) {}

Jet::Jet(int dim, int order) {
  if (order < 0 || order > kMaxJetOrder) throw UnsupportedOrder(order);
  layout_ = &MonomialLayout::get(dim);
  order_ = order;
  c_.assign(static_cast<std::size_t>(layout_->size(order)), 0.0);
}

Jet Jet::constant(int dim, int order, double value) {
  Jet j(dim, order);
  j.c_[0] = value;
  return j;
}

Jet Jet::variable(int dim, int order, int k, double value) {
  Jet j(dim, order);
  j.c_[0] = value;
  if (order >= 1) j.c_[1 + k] = 1.0;
  return j;
}

double Jet::partial(std::span<const int> m) const {
  int deg = 0;
  double fact = 1.0;
  for (int v : m) {
    deg += v;
    if (v >= 0 && v <= kMaxJetOrder) fact *= kFactorial[v];
  }
  if (deg > order_) throw UnsupportedOrder(deg);
  return c_[layout_->index_of(m)] * fact;
}

double Jet::d(int k) const {
  if (order_ < 1) throw UnsupportedOrder(1);
  return c_[1 + k];
}

double Jet::d(int k, int l) const {
  std::array<int, kMaxJetDim> m{};
  ++m[k];
  ++m[l];
  return partial(std::span<const int>(m.data(), dim()));
}

double Jet::d(int k, int l, int q) const {
  std::array<int, kMaxJetDim> m{};
  ++m[k];
  ++m[l];
  ++m[q];
  return partial(std::span<const int>(m.data(), dim()));
}

Eigen::VectorXd Jet::gradient() const {
  Eigen::VectorXd g(dim());
  for (int k = 0; k < dim(); ++k) g[k] = d(k);
  return g;
}

Eigen::MatrixXd Jet::hessian() const {
  Eigen::MatrixXd h(dim(), dim());
  for (int k = 0; k < dim(); ++k)
    for (int l = 0; l < dim(); ++l) h(k, l) = d(k, l);
  return h;
}

Jet Jet::derivative(int k) const {
  if (order_ < 1) throw UnsupportedOrder(order_ - 1);
  Jet out(layout_, order_ - 1);
  for (int i = 0; i < layout_->size(order_); ++i) {
    const int lo = layout_->lower(i, k);
    if (lo >= 0) out.c_[lo] += c_[i] * layout_->exponents(i)[k];
  }
  return out;
}

Jet Jet::truncated(int order) const {
  if (order > order_) throw UnsupportedOrder(order);
  Jet out(layout_, order);
  std::copy_n(c_.begin(), out.c_.size(), out.c_.begin());
  return out;
}

Jet Jet::displacement() const {
  Jet out = *this;
  out.c_[0] = 0.0;
  return out;
}

void Jet::align(const Jet& o) {
  if (layout_ != o.layout_)
    throw std::invalid_argument("Jet: operands have different variable counts");
  if (o.order_ < order_) {
    order_ = o.order_;
    c_.resize(o.c_.size());
  }
}

Jet& Jet::operator+=(const Jet& o) {
  align(o);
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
  return *this;
}

Jet& Jet::operator-=(const Jet& o) {
  align(o);
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
  return *this;
}

Jet& Jet::operator*=(double s) {
  for (double& v : c_) v *= s;
  return *this;
}

Jet operator+(Jet a, const Jet& b) { return a += b; }
Jet operator-(Jet a, const Jet& b) { return a -= b; }
Jet operator-(Jet a) { return a *= -1.0; }
Jet operator-(double s, Jet a) {
  a *= -1.0;
  return a += s;
}

Jet operator*(const Jet& a, const Jet& b) {
  if (a.layout_ != b.layout_)
    throw std::invalid_argument("Jet: operands have different variable counts");
  const int order = std::min(a.order_, b.order_);
  Jet out(a.layout_, order);
  for (const auto& p : a.layout_->products(order)) out.c_[p.c] += a.c_[p.a] * b.c_[p.b];
  return out;
}

Jet Jet::apply(std::span<const double> derivs) const {
  const Jet delta = displacement();
  Jet out(layout_, order_);
  out.c_[0] = derivs[0];
  Jet power = delta;
  for (int k = 1; k <= order_; ++k) {
    const double coef = derivs[k] / kFactorial[k];
    for (std::size_t i = 0; i < out.c_.size(); ++i) out.c_[i] += coef * power.c_[i];
    if (k < order_) power = power * delta;
  }
  return out;
}

Jet operator/(double s, const Jet& a) {
  const double x = a.value();
  if (x == 0.0) throw std::domain_error("Jet: division by a jet with zero value");
  const double r = 1.0 / x;
  const std::array<double, 4> dv{r, -r * r, 2.0 * r * r * r, -6.0 * r * r * r * r};
  return a.apply(dv) * s;
}

Jet operator/(const Jet& a, const Jet& b) { return a * (1.0 / b); }

Jet Jet::times_affine(double c0, int k, double c1) const {
  Jet out = *this;
  out *= c0;
  if (c1 != 0.0) {
    for (int i = 0; i < layout_->size(order_); ++i) {
      const int up = layout_->raise(i, k);
      if (up >= 0 && layout_->degree(up) <= order_) out.c_[up] += c1 * c_[i];
    }
  }
  return out;
}

Jet sqrt(const Jet& a) {
  const double x = a.value();
  if (x <= 0.0) throw std::domain_error("Jet sqrt: nonpositive base value");
  const double s = std::sqrt(x);
  const std::array<double, 4> dv{s, 0.5 / s, -0.25 / (s * x), 0.375 / (s * x * x)};
  return a.apply(dv);
}

Jet exp(const Jet& a) {
  const double e = std::exp(a.value());
  const std::array<double, 4> dv{e, e, e, e};
  return a.apply(dv);
}

Jet log(const Jet& a) {
  const double x = a.value();
  if (x <= 0.0) throw std::domain_error("Jet log: nonpositive base value");
  const std::array<double, 4> dv{std::log(x), 1.0 / x, -1.0 / (x * x), 2.0 / (x * x * x)};
  return a.apply(dv);
}

Jet sin(const Jet& a) {
  const double s = std::sin(a.value()), c = std::cos(a.value());
  const std::array<double, 4> dv{s, c, -s, -c};
  return a.apply(dv);
}

Jet cos(const Jet& a) {
  const double s = std::sin(a.value()), c = std::cos(a.value());
  const std::array<double, 4> dv{c, -s, -c, s};
  return a.apply(dv);
}

Jet square(const Jet& a) { return a * a; }

Jet pow(const Jet& a, int e) {
  if (e < 0) return 1.0 / pow(a, -e);
  Jet out = Jet::constant(a.dim(), a.order(), 1.0);
  for (int i = 0; i < e; ++i) out = out * a;
  return out;
}

Jet compose(const Jet& outer, std::span<const Jet> inner) {
  if (static_cast<int>(inner.size()) != outer.dim())
    throw std::invalid_argument("compose: need one inner jet per outer variable");
  int order = outer.order();
  for (const Jet& j : inner) order = std::min(order, j.order());
  const int dim = inner.front().dim();
  // powers[k][e] = inner[k]^e
  std::vector<std::array<Jet, kMaxJetOrder + 1>> powers(inner.size());
  for (std::size_t k = 0; k < inner.size(); ++k) {
    powers[k][0] = Jet::constant(dim, order, 1.0);
    if (order >= 1) powers[k][1] = inner[k].truncated(order);
    for (int e = 2; e <= order; ++e) powers[k][e] = powers[k][e - 1] * powers[k][1];
  }
  const MonomialLayout& L = outer.layout();
  Jet out(dim, order);
  for (int i = 0; i < L.size(order); ++i) {
    const double c = outer.coeff(i);
    if (c == 0.0) continue;
    auto e = L.exponents(i);
    Jet term;
    bool first = true;
    for (int k = 0; k < L.dim(); ++k) {
      if (e[k] == 0) continue;
      term = first ? powers[k][e[k]] : term * powers[k][e[k]];
      first = false;
    }
    if (first) {
      out += c;
    } else {
      out += term * c;
    }
  }
  return out;
}

}  // namespace heis
