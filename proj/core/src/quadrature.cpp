#include "heisenberg/quadrature.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <random>
#include <thread>

namespace heis {

namespace {

GaussRule compute_gauss_legendre(int order) {
  GaussRule r;
  r.nodes.resize(order);
  r.weights.resize(order);
  const int half = (order + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= order; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (order == 1) p0 = 1.0;
      dp = order * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // recompute the derivative at the converged node
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= order; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = order * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.nodes[i] = -x;
    r.nodes[order - 1 - i] = x;
    r.weights[i] = w;
    r.weights[order - 1 - i] = w;
  }
  if (order % 2 == 1) r.nodes[order / 2] = 0.0;
  return r;
}

std::atomic<int> g_threads{0};

double radical_inverse(std::uint64_t i, int base) {
  double inv = 1.0 / base, f = inv, r = 0.0;
  while (i > 0) {
    r += f * static_cast<double>(i % base);
    i /= base;
    f *= inv;
  }
  return r;
}

constexpr std::ptrdiff_t kFitWindow = 4;

constexpr int kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41};

struct NodeSet {
  std::vector<Eigen::VectorXd> points;
  std::vector<double> weights;
};

// Tensor Gauss nodes on a box; points within delta of a ball exclusion are
// dropped. Ordering is row-major with the last axis fastest.
NodeSet tensor_nodes(const Eigen::VectorXd& lo, const Eigen::VectorXd& hi, const std::vector<int>& orders,
                     const std::vector<Exclusion>& balls, double delta) {
  const int d = static_cast<int>(orders.size());
  std::vector<const GaussRule*> rules;
  for (int o : orders) rules.push_back(&gauss_legendre(o));
  std::size_t total = 1;
  for (int o : orders) total *= static_cast<std::size_t>(o);
  NodeSet ns;
  ns.points.reserve(total);
  ns.weights.reserve(total);
  std::vector<int> idx(d, 0);
  Eigen::VectorXd u(d);
  for (std::size_t k = 0; k < total; ++k) {
    double w = 1.0;
    for (int a = 0; a < d; ++a) {
      const double half = 0.5 * (hi[a] - lo[a]);
      u[a] = lo[a] + half * (rules[a]->nodes[idx[a]] + 1.0);
      w *= half * rules[a]->weights[idx[a]];
    }
    bool keep = true;
    for (const auto& e : balls)
      if (delta > 0.0 && (u - e.center).norm() < delta) keep = false;
    if (keep) {
      ns.points.push_back(u);
      ns.weights.push_back(w);
    }
    for (int a = d - 1; a >= 0; --a) {
      if (++idx[a] < orders[a]) break;
      idx[a] = 0;
    }
  }
  return ns;
}

NodeSet halton_nodes(const Eigen::VectorXd& lo, const Eigen::VectorXd& hi, std::int64_t samples,
                     std::uint64_t seed, const std::vector<Exclusion>& balls, double delta) {
  const int d = static_cast<int>(lo.size());
  if (d > static_cast<int>(std::size(kPrimes))) throw std::invalid_argument("halton_nodes: too many axes");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  Eigen::VectorXd shift(d);
  for (int a = 0; a < d; ++a) shift[a] = u01(rng);
  const double vol = (hi - lo).prod();
  NodeSet ns;
  const double w = vol / static_cast<double>(samples);
  Eigen::VectorXd u(d);
  for (std::int64_t i = 1; i <= samples; ++i) {
    for (int a = 0; a < d; ++a) {
      double h = radical_inverse(static_cast<std::uint64_t>(i), kPrimes[a]) + shift[a];
      h -= std::floor(h);
      u[a] = lo[a] + (hi[a] - lo[a]) * h;
    }
    bool keep = true;
    for (const auto& e : balls)
      if (delta > 0.0 && (u - e.center).norm() < delta) keep = false;
    if (keep) {
      ns.points.push_back(u);
      ns.weights.push_back(w);
    }
  }
  return ns;
}

// Evaluates `count` weighted values per node and reduces each column.
std::vector<double> reduce_nodes(const NodeSet& ns, int count,
                                 const std::function<void(const Eigen::VectorXd&, std::span<double>)>& eval) {
  const std::size_t N = ns.points.size();
  std::vector<double> vals(N * count, 0.0);
  parallel_for(N, [&](std::size_t i) {
    std::span<double> out(vals.data() + i * count, static_cast<std::size_t>(count));
    eval(ns.points[i], out);
    for (double& v : out) v *= ns.weights[i];
  });
  std::vector<double> sums(count);
  std::vector<double> column(N);
  for (int c = 0; c < count; ++c) {
    for (std::size_t i = 0; i < N; ++i) column[i] = vals[i * count + c];
    sums[c] = pairwise_sum(column);
  }
  return sums;
}

std::vector<Exclusion> balls_of(const std::vector<Exclusion>& ex) {
  std::vector<Exclusion> out;
  for (const auto& e : ex)
    if (e.kind == Exclusion::Kind::ball) out.push_back(e);
  return out;
}

void shrink_box(const std::vector<Exclusion>& ex, double delta, Eigen::VectorXd& lo, Eigen::VectorXd& hi) {
  for (const auto& e : ex) {
    if (e.kind != Exclusion::Kind::edge) continue;
    if (e.upper)
      hi[e.axis] -= delta;
    else
      lo[e.axis] += delta;
  }
  for (Eigen::Index a = 0; a < lo.size(); ++a)
    if (!(hi[a] > lo[a])) throw std::invalid_argument("cap radius removes the whole parameter range");
}

std::vector<int> level_orders(const QuadratureSpec& spec, int level, int dim, const std::vector<int>& weight) {
  std::vector<int> o(dim);
  for (int a = 0; a < dim; ++a) o[a] = spec.order(a, level, weight);
  return o;
}

std::vector<double> surface_pass(const SurfaceChart& chart, const SurfaceIntegrand& f, int count,
                                 Measure measure, const QuadratureSpec& spec, double delta, int level) {
  Eigen::VectorXd lo = chart.box().lo, hi = chart.box().hi;
  if (delta > 0.0) shrink_box(chart.exclusions(), delta, lo, hi);
  const auto balls = balls_of(chart.exclusions());
  const NodeSet ns = spec.rule == Rule::gauss_legendre
                         ? tensor_nodes(lo, hi, level_orders(spec, level, chart.box().dim(), chart.axis_weight()),
                                        balls, delta)
                         : halton_nodes(lo, hi, spec.samples << level, spec.seed, balls, delta);
  const ImplicitSurface& surf = chart.surface();
  return reduce_nodes(ns, count, [&](const Eigen::VectorXd& u, std::span<double> out) {
    const auto s = chart.sample(u);
    const SurfaceGeometry g = surface_geometry(surf, s.p, spec.charTol);
    f(g, out);
    const double m = measure == Measure::h_perimeter ? s.area * g.pH_norm : s.area;
    for (double& v : out) v *= m;
  });
}

double linear_fit_residual(const std::vector<std::pair<double, double>>& pts, double alpha, double& L, double& c) {
  // v = L + c * d^alpha
  double s1 = 0, sx = 0, sxx = 0, sy = 0, sxy = 0;
  for (const auto& [d, v] : pts) {
    const double x = std::pow(d, alpha);
    s1 += 1;
    sx += x;
    sxx += x * x;
    sy += v;
    sxy += x * v;
  }
  const double det = s1 * sxx - sx * sx;
  if (std::abs(det) < 1e-300) {
    L = sy / s1;
    c = 0.0;
  } else {
    c = (s1 * sxy - sx * sy) / det;
    L = (sy - c * sx) / s1;
  }
  double res = 0.0;
  for (const auto& [d, v] : pts) {
    const double e = v - (L + c * std::pow(d, alpha));
    res += e * e;
  }
  return res;
}

}  // namespace

std::vector<IntegralResult> results_from_levels(const std::vector<std::vector<double>>& per_level, int count,
                                                double floor) {
  std::vector<IntegralResult> out(count);
  for (int c = 0; c < count; ++c) {
    auto& r = out[c];
    for (std::size_t L = 0; L < per_level.size(); ++L) r.refinementTrail.emplace_back(static_cast<int>(L), per_level[L][c]);
    r.value = r.refinementTrail.back().second;
    r.errorEstimate = r.refinementTrail.size() >= 2
                          ? std::abs(r.value - r.refinementTrail[r.refinementTrail.size() - 2].second)
                          : 0.0;
    r.cauchy = is_cauchy(r.refinementTrail, floor);
  }
  return out;
}

const GaussRule& gauss_legendre(int order) {
  if (order < 1) throw std::invalid_argument("gauss_legendre: order must be positive");
  static std::mutex mu;
  static std::map<int, GaussRule> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(order);
  if (it == cache.end()) it = cache.emplace(order, compute_gauss_legendre(order)).first;
  return it->second;
}

double pairwise_sum(std::span<const double> v) {
  if (v.size() <= 8) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  const std::size_t h = v.size() / 2;
  return pairwise_sum(v.first(h)) + pairwise_sum(v.subspan(h));
}

int worker_threads() {
  const int t = g_threads.load();
  if (t > 0) return t;
  return std::max(1u, std::thread::hardware_concurrency());
}

void set_worker_threads(int threads) { g_threads.store(std::max(0, threads)); }

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
  const std::size_t T = std::min<std::size_t>(static_cast<std::size_t>(worker_threads()), count);
  if (T <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::exception_ptr> errors(T);
  std::vector<std::thread> pool;
  pool.reserve(T);
  for (std::size_t t = 0; t < T; ++t) {
    pool.emplace_back([&, t] {
      const std::size_t begin = count * t / T, end = count * (t + 1) / T;
      try {
        for (std::size_t i = begin; i < end; ++i) body(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

SurfaceChart::SurfaceChart(std::string label, ImplicitSurface surface, ParamBox box, Map map, bool closed)
    : label_(std::move(label)),
      surface_(std::move(surface)),
      box_(std::move(box)),
      map_(std::move(map)),
      closed_(closed),
      axis_weight_(box_.dim(), 1) {
  if (box_.dim() != 2 * surface_.n())
    throw DimensionMismatch("SurfaceChart: parameter box must have 2n axes");
}

Point SurfaceChart::point(const Eigen::VectorXd& u) const { return sample(u).p; }

double SurfaceChart::area_element(const Eigen::VectorXd& u) const { return sample(u).area; }

namespace {
// Coordinate Jacobian (rows: coordinates) expressed in the orthonormal frame.
Eigen::MatrixXd frame_jacobian_of(const std::vector<Jet>& x, Point& p) {
  const int d = static_cast<int>(x.size());
  const int k = x.front().dim();
  Eigen::VectorXd c(d);
  Eigen::MatrixXd J(d, k);
  for (int i = 0; i < d; ++i) {
    c[i] = x[i].value();
    for (int a = 0; a < k; ++a) J(i, a) = x[i].d(a);
  }
  p = Point::from_coords(c);
  // F^{-1}: frame_basis is identity plus a last row, so its inverse negates that row.
  Eigen::MatrixXd Finv = frame_basis(p);
  Finv.row(d - 1).head(d - 1) *= -1.0;
  return Finv * J;
}
}  // namespace

SurfaceChart::Sample SurfaceChart::sample(const Eigen::VectorXd& u) const {
  const auto x = map_(u);
  Sample s;
  const Eigen::MatrixXd E = frame_jacobian_of(x, s.p);
  const double det = (E.transpose() * E).determinant();
  s.area = std::sqrt(std::max(0.0, det));
  return s;
}

DomainChart::DomainChart(std::string label, int n, Map map)
    : label_(std::move(label)), n_(n), map_(std::move(map)), axis_weight_(2 * n + 1, 1) {}

Point DomainChart::point(const Eigen::VectorXd& w) const { return sample(w).p; }
double DomainChart::jacobian_det(const Eigen::VectorXd& w) const { return sample(w).det; }

DomainChart::Sample DomainChart::sample(const Eigen::VectorXd& w) const {
  const auto x = map_(w);
  Sample s;
  const Eigen::MatrixXd E = frame_jacobian_of(x, s.p);
  s.det = std::abs(E.determinant());
  return s;
}

DomainChart DomainChart::translated(const Point& q) const {
  const Map inner = map_;
  const int n = n_;
  DomainChart out(label_ + " translated", n_, [inner, q, n](const Eigen::VectorXd& w) {
    auto x = inner(w);
    Jet sympl = x[0] * 0.0;
    for (int i = 0; i < n; ++i) sympl += x[2 * i + 1] * q.z[2 * i] - x[2 * i] * q.z[2 * i + 1];
    std::vector<Jet> y;
    for (int k = 0; k < 2 * n; ++k) y.push_back(x[k] + q.z[k]);
    y.push_back(x[2 * n] + q.t + sympl * 0.5);
    return y;
  });
  out.set_axis_weight(axis_weight_);
  return out;
}

std::vector<double> CapRadii::radii() const {
  if (!(delta0 > 0.0) || !(ratio > 0.0 && ratio < 1.0) || count < 1)
    throw std::invalid_argument("cap radii need delta0 > 0, 0 < ratio < 1, count >= 1");
  std::vector<double> r;
  double d = delta0;
  for (int k = 0; k < count; ++k, d *= ratio) r.push_back(d);
  return r;
}

int QuadratureSpec::order(int axis, int level, const std::vector<int>& axis_weight) const {
  if (orders.empty()) throw std::invalid_argument("QuadratureSpec: no orders given");
  const int base = orders.size() == 1 ? orders[0] : orders.at(axis);
  if (base < 1) throw std::invalid_argument("QuadratureSpec: orders must be positive");
  const int w = axis < static_cast<int>(axis_weight.size()) ? axis_weight[axis] : 1;
  return base * w * (1 << level);
}

bool is_cauchy(const std::vector<std::pair<int, double>>& trail, double floor) {
  if (trail.size() < 2) return false;
  const double scale = std::max(1.0, std::abs(trail.back().second));
  std::vector<double> d;
  for (std::size_t k = 1; k < trail.size(); ++k) d.push_back(std::abs(trail[k].second - trail[k - 1].second));
  if (d.back() <= floor * scale) return true;
  if (d.size() < 2) return false;
  for (std::size_t k = 1; k < d.size(); ++k)
    if (d[k] > d[k - 1] && d[k] > floor * scale) return false;
  return true;
}

std::vector<IntegralResult> surface_integrals(const SurfaceChart& chart, const SurfaceIntegrand& f, int count,
                                              Measure measure, const QuadratureSpec& spec, double delta) {
  std::vector<std::vector<double>> per_level;
  for (int L = 0; L < spec.levels; ++L) per_level.push_back(surface_pass(chart, f, count, measure, spec, delta, L));
  return results_from_levels(per_level, count, spec.cauchyFloor);
}

IntegralResult surface_integral(const SurfaceChart& chart, const std::function<double(const SurfaceGeometry&)>& f,
                                Measure measure, const QuadratureSpec& spec, double delta) {
  return surface_integrals(
      chart, [&](const SurfaceGeometry& g, std::span<double> out) { out[0] = f(g); }, 1, measure, spec, delta)[0];
}

ExcisionTrail fit_power_law(std::vector<std::pair<double, double>> pts, double noise) {
  ExcisionTrail t;
  std::sort(pts.begin(), pts.end(), [](auto& a, auto& b) { return a.first > b.first; });
  t.points = pts;
  double vmin = pts.front().second, vmax = vmin;
  for (const auto& p : pts) {
    vmin = std::min(vmin, p.second);
    vmax = std::max(vmax, p.second);
  }
  t.spread = vmax - vmin;
  const double scale = std::max(1.0, std::abs(pts.back().second));
  if (pts.size() < 3 || t.spread <= 1e-12 * scale) {
    // Caps do not change the value beyond roundoff.
    t.limit = pts.back().second;
    t.power = 0.0;
    t.converged = t.spread <= 1e-12 * scale;
    return t;
  }
  // Higher-order terms dominate the large caps, so the model is fitted on the
  // smallest radii only; the full trail stays in the report.
  std::vector<std::pair<double, double>> tail(pts.end() - std::min<std::ptrdiff_t>(kFitWindow, pts.size()), pts.end());
  // alpha on a grid, then golden-section refinement of the best bracket
  double best_a = 0.0, best_r = std::numeric_limits<double>::infinity();
  double L = 0, c = 0;
  for (int k = -200; k <= 600; ++k) {
    const double a = 0.01 * k;
    if (k == 0) continue;
    const double r = linear_fit_residual(tail, a, L, c);
    if (r < best_r) {
      best_r = r;
      best_a = a;
    }
  }
  double lo = best_a - 0.01, hi = best_a + 0.01;
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  for (int it = 0; it < 60; ++it) {
    const double a1 = hi - g * (hi - lo), a2 = lo + g * (hi - lo);
    if (linear_fit_residual(tail, a1, L, c) < linear_fit_residual(tail, a2, L, c))
      hi = a2;
    else
      lo = a1;
  }
  t.power = 0.5 * (lo + hi);
  linear_fit_residual(tail, t.power, t.limit, t.coefficient);
  double worst = 0.0;
  for (const auto& [d, v] : tail) worst = std::max(worst, std::abs(v - (t.limit + t.coefficient * std::pow(d, t.power))));
  t.fitResidual = worst;
  double tmin = tail.front().second, tmax = tmin;
  for (const auto& p : tail) {
    tmin = std::min(tmin, p.second);
    tmax = std::max(tmax, p.second);
  }
  if (tmax - tmin <= noise) {
    // the small caps differ by less than the quadrature error: nothing left to fit
    t.limit = pts.back().second;
    t.fitResidual = tmax - tmin;
    t.converged = true;
    return t;
  }
  t.flagged = worst > 0.1 * (tmax - tmin);
  t.converged = t.power > 0.0 && !t.flagged;
  return t;
}

std::vector<IntegralResult> excised_surface_integrals(const SurfaceChart& chart, const SurfaceIntegrand& f, int count,
                                                      Measure measure, const QuadratureSpec& spec) {
  const auto radii = spec.caps.radii();
  const int top = spec.levels - 1;
  // refinement trail at the smallest cap
  auto results = surface_integrals(chart, f, count, measure, spec, radii.back());
  std::vector<std::vector<std::pair<double, double>>> pts(count);
  for (double d : radii) {
    const auto v = d == radii.back() ? std::vector<double>{} : surface_pass(chart, f, count, measure, spec, d, top);
    for (int c = 0; c < count; ++c) pts[c].emplace_back(d, d == radii.back() ? results[c].value : v[c]);
  }
  std::optional<std::vector<double>> direct;
  try {
    direct = surface_pass(chart, f, count, measure, spec, 0.0, top);
  } catch (const CharacteristicPoint&) {
    // some node of the full chart sits on the characteristic set
  }
  for (int c = 0; c < count; ++c) {
    ExcisionTrail t = fit_power_law(pts[c], results[c].errorEstimate);
    if (direct) t.direct = (*direct)[c];
    results[c].value = t.converged ? t.limit : std::numeric_limits<double>::quiet_NaN();
    results[c].excision = std::move(t);
  }
  return results;
}

IntegralResult excised_surface_integral(const SurfaceChart& chart,
                                        const std::function<double(const SurfaceGeometry&)>& f, Measure measure,
                                        const QuadratureSpec& spec) {
  return excised_surface_integrals(
      chart, [&](const SurfaceGeometry& g, std::span<double> out) { out[0] = f(g); }, 1, measure, spec)[0];
}

std::vector<IntegralResult> domain_integrals(const DomainChart& chart, const DomainIntegrand& f, int count,
                                             const QuadratureSpec& spec) {
  const int d = 2 * chart.n() + 1;
  const Eigen::VectorXd lo = Eigen::VectorXd::Zero(d), hi = Eigen::VectorXd::Ones(d);
  std::vector<std::vector<double>> per_level;
  for (int L = 0; L < spec.levels; ++L) {
    const NodeSet ns = spec.rule == Rule::gauss_legendre
                           ? tensor_nodes(lo, hi, level_orders(spec, L, d, chart.axis_weight()), {}, 0.0)
                           : halton_nodes(lo, hi, spec.samples << L, spec.seed, {}, 0.0);
    per_level.push_back(reduce_nodes(ns, count, [&](const Eigen::VectorXd& w, std::span<double> out) {
      const auto s = chart.sample(w);
      f(s.p, out);
      for (double& v : out) v *= s.det;
    }));
  }
  return results_from_levels(per_level, count, spec.cauchyFloor);
}

IntegralResult domain_integral(const DomainChart& chart, const std::function<double(const Point&)>& f,
                               const QuadratureSpec& spec) {
  return domain_integrals(
      chart, [&](const Point& p, std::span<double> out) { out[0] = f(p); }, 1, spec)[0];
}

std::vector<std::vector<int>> char_scan(const SurfaceChart& chart, const std::vector<int>& grid, double charTol) {
  const ParamBox& box = chart.box();
  const int d = box.dim();
  if (static_cast<int>(grid.size()) != d) throw std::invalid_argument("char_scan: grid needs one count per axis");
  constexpr int kSub = 5;  // samples per cell and axis, edges included
  std::vector<std::vector<int>> flagged;
  std::vector<int> cell(d, 0);
  std::size_t total = 1;
  for (int g : grid) total *= static_cast<std::size_t>(g);
  const ImplicitSurface& surf = chart.surface();
  for (std::size_t c = 0; c < total; ++c) {
    bool hit = false;
    std::vector<int> sub(d, 0);
    std::size_t subtotal = 1;
    for (int a = 0; a < d; ++a) subtotal *= kSub;
    Eigen::VectorXd u(d);
    for (std::size_t s = 0; s < subtotal && !hit; ++s) {
      for (int a = 0; a < d; ++a) {
        const double h = (box.hi[a] - box.lo[a]) / grid[a];
        u[a] = box.lo[a] + h * (cell[a] + static_cast<double>(sub[a]) / (kSub - 1));
      }
      try {
        normal_data(surf, chart.point(u), charTol);
      } catch (const CharacteristicPoint&) {
        hit = true;
      } catch (const DegenerateGradient&) {
        hit = true;
      }
      for (int a = d - 1; a >= 0; --a) {
        if (++sub[a] < kSub) break;
        sub[a] = 0;
      }
    }
    if (hit) flagged.push_back(cell);
    for (int a = d - 1; a >= 0; --a) {
      if (++cell[a] < grid[a]) break;
      cell[a] = 0;
    }
  }
  return flagged;
}

std::vector<Exclusion> exclusions_from_scan(const SurfaceChart& chart, const std::vector<int>& grid,
                                            const std::vector<std::vector<int>>& cells) {
  const ParamBox& box = chart.box();
  const int d = box.dim();
  std::size_t face_cells = 1;
  std::vector<Exclusion> out;
  std::vector<bool> used(cells.size(), false);
  for (int a = 0; a < d; ++a) {
    face_cells = 1;
    for (int b = 0; b < d; ++b)
      if (b != a) face_cells *= static_cast<std::size_t>(grid[b]);
    for (bool upper : {false, true}) {
      const int idx = upper ? grid[a] - 1 : 0;
      std::size_t on_face = 0;
      for (const auto& c : cells)
        if (c[a] == idx) ++on_face;
      if (on_face == face_cells) {
        out.push_back({Exclusion::Kind::edge, a, upper, {}});
        for (std::size_t k = 0; k < cells.size(); ++k)
          if (cells[k][a] == idx) used[k] = true;
      }
    }
  }
  for (std::size_t k = 0; k < cells.size(); ++k) {
    if (used[k]) continue;
    Exclusion e;
    e.kind = Exclusion::Kind::ball;
    e.center.resize(d);
    for (int a = 0; a < d; ++a) {
      const double h = (box.hi[a] - box.lo[a]) / grid[a];
      e.center[a] = box.lo[a] + h * (cells[k][a] + 0.5);
    }
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace heis
