#include "heisenberg/charts.hpp"

#include <cmath>
#include <numbers>

namespace heis {

namespace {

constexpr double kPi = std::numbers::pi;

void require_n(int n) {
  if (n != 1 && n != 2) throw std::invalid_argument("charts are provided for H^1 and H^2 only");
}

std::vector<Jet> variables(const Eigen::VectorXd& u) {
  std::vector<Jet> v;
  const int d = static_cast<int>(u.size());
  for (int k = 0; k < d; ++k) v.push_back(Jet::variable(d, 1, k, u[k]));
  return v;
}

// unit box coordinate w_k -> lo + (hi - lo) w_k as a jet in all box variables
std::vector<Jet> box_variables(const Eigen::VectorXd& w, const ParamBox& box) {
  const int total = static_cast<int>(w.size());
  std::vector<Jet> u;
  for (int k = 0; k < box.dim(); ++k)
    u.push_back(Jet::variable(total, 1, k, w[k]) * (box.hi[k] - box.lo[k]) + box.lo[k]);
  return u;
}

std::vector<Exclusion> polar_caps() {
  return {{Exclusion::Kind::edge, 0, false, {}}, {Exclusion::Kind::edge, 0, true, {}}};
}

Eigen::VectorXd jet_values(const std::vector<Jet>& v) {
  Eigen::VectorXd out(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) out[static_cast<Eigen::Index>(k)] = v[k].value();
  return out;
}

// lambda(u) as an order-1 jet in the variables of `base` and `dir`.
Jet ray_parameter(const ScalarField& F, const std::vector<Jet>& base, const std::vector<Jet>& dir, double s,
                  double guess) {
  const Eigen::VectorXd b = jet_values(base), d = jet_values(dir);
  const double lam = solve_ray(F, b, d, s, guess);
  const Point x = Point::from_coords(b + lam * d);
  const Eigen::VectorXd g = F.jet(x, 1).gradient();
  const double gd = g.dot(d);
  const int nv = base.front().dim();
  Jet out = Jet::constant(nv, 1, lam);
  for (int k = 0; k < nv; ++k) {
    double num = 0.0;
    for (std::size_t i = 0; i < base.size(); ++i) num += g[static_cast<Eigen::Index>(i)] * (base[i].d(k) + lam * dir[i].d(k));
    out += Jet::variable(nv, 1, k, 0.0) * (-num / gd);
  }
  return out;
}

}  // namespace

std::vector<Jet> horizontal_direction(std::span<const Jet> u, int n) {
  require_n(n);
  if (n == 1) return {cos(u[0]), sin(u[0])};
  const Jet cc = cos(u[0]), sc = sin(u[0]);
  return {cc * cos(u[1]), cc * sin(u[1]), sc * cos(u[2]), sc * sin(u[2])};
}

ParamBox horizontal_sphere_box(int n) {
  require_n(n);
  if (n == 1) return {Eigen::VectorXd::Constant(1, 0.0), Eigen::VectorXd::Constant(1, 2 * kPi)};
  Eigen::VectorXd lo(3), hi(3);
  lo << 0, 0, 0;
  hi << kPi / 2, 2 * kPi, 2 * kPi;
  return {lo, hi};
}

std::vector<Jet> polar_direction(std::span<const Jet> u, int n) {
  const auto h = horizontal_direction(u.subspan(1), n);
  const Jet st = sin(u[0]);
  std::vector<Jet> out;
  for (const auto& c : h) out.push_back(st * c);
  out.push_back(cos(u[0]));
  return out;
}

ParamBox polar_box(int n) {
  const ParamBox h = horizontal_sphere_box(n);
  ParamBox b{Eigen::VectorXd(2 * n), Eigen::VectorXd(2 * n)};
  b.lo << 0.0, h.lo;
  b.hi << kPi, h.hi;
  return b;
}

std::vector<int> polar_axis_weight(int n) {
  if (n == 1) return {1, 2};
  return {1, 1, 2, 2};
}

SurfaceChart sphere_chart(const Eigen::VectorXd& center, double r) {
  const int n = static_cast<int>(center.size()) / 2;
  require_n(n);
  if (!(r > 0)) throw std::invalid_argument("sphere: radius must be positive");
  SurfaceChart ch("sphere", ImplicitSurface(fields::euclidean_sphere(center, r)), polar_box(n),
                  [center, r, n](const Eigen::VectorXd& u) {
                    const auto v = variables(u);
                    auto x = polar_direction(v, n);
                    for (std::size_t k = 0; k < x.size(); ++k) x[k] = x[k] * r + center[static_cast<Eigen::Index>(k)];
                    return x;
                  });
  ch.set_axis_weight(polar_axis_weight(n));
  // Characteristic points lie on the poles only when the centre is on the t-axis.
  if (center.head(2 * n).norm() == 0.0) ch.set_exclusions(polar_caps());
  return ch;
}

SurfaceChart ellipsoid_chart(int n, double a, double b, double c) {
  require_n(n);
  if (!(a > 0 && b > 0 && c > 0)) throw std::invalid_argument("ellipsoid: semi-axes must be positive");
  SurfaceChart ch("ellipsoid", ImplicitSurface(fields::ellipsoid(n, a, b, c)), polar_box(n),
                  [n, a, b, c](const Eigen::VectorXd& u) {
                    const auto v = variables(u);
                    auto x = polar_direction(v, n);
                    for (int i = 0; i < n; ++i) {
                      x[2 * i] *= a;
                      x[2 * i + 1] *= b;
                    }
                    x[2 * n] *= c;
                    return x;
                  });
  ch.set_axis_weight(polar_axis_weight(n));
  ch.set_exclusions(polar_caps());
  return ch;
}

SurfaceChart torus_chart(double R, double r) {
  if (!(R > r && r > 0)) throw std::invalid_argument("torus: need R > r > 0");
  ParamBox box{Eigen::Vector2d(0, 0), Eigen::Vector2d(2 * kPi, 2 * kPi)};
  SurfaceChart ch("torus", ImplicitSurface(fields::torus(1, R, r)), box, [R, r](const Eigen::VectorXd& u) {
    const auto v = variables(u);
    const Jet rho = cos(v[1]) * r + R;
    return std::vector<Jet>{rho * cos(v[0]), rho * sin(v[0]), sin(v[1]) * r};
  });
  ch.set_axis_weight({2, 1});
  return ch;
}

SurfaceChart cylinder_patch_chart(int n, double r, double t0, double t1) {
  require_n(n);
  if (!(r > 0) || !(t1 > t0)) throw std::invalid_argument("cylinder_patch: need r > 0 and t1 > t0");
  const ParamBox h = horizontal_sphere_box(n);
  ParamBox box{Eigen::VectorXd(2 * n), Eigen::VectorXd(2 * n)};
  box.lo << h.lo, t0;
  box.hi << h.hi, t1;
  SurfaceChart ch("cylinder_patch", ImplicitSurface(fields::vertical_cylinder(n, r)), box,
                  [n, r](const Eigen::VectorXd& u) {
                    const auto v = variables(u);
                    auto x = horizontal_direction(std::span<const Jet>(v).first(2 * n - 1), n);
                    for (auto& c : x) c *= r;
                    x.push_back(v[2 * n - 1]);
                    return x;
                  },
                  false);
  ch.set_axis_weight(n == 1 ? std::vector<int>{2, 1} : std::vector<int>{1, 2, 2, 1});
  return ch;
}

DomainChart ball_chart(const Eigen::VectorXd& center, double r) {
  const int n = static_cast<int>(center.size()) / 2;
  require_n(n);
  const ParamBox pb = polar_box(n);
  DomainChart ch("ball", n, [center, r, n, pb](const Eigen::VectorXd& w) {
    const int d = 2 * n + 1;
    std::vector<Jet> ang;
    for (int k = 0; k < 2 * n; ++k)
      ang.push_back(Jet::variable(d, 1, k + 1, w[k + 1]) * (pb.hi[k] - pb.lo[k]) + pb.lo[k]);
    const Jet rad = Jet::variable(d, 1, 0, w[0]) * r;
    auto x = polar_direction(ang, n);
    for (std::size_t k = 0; k < x.size(); ++k) x[k] = x[k] * rad + center[static_cast<Eigen::Index>(k)];
    return x;
  });
  auto aw = polar_axis_weight(n);
  aw.insert(aw.begin(), 1);
  ch.set_axis_weight(aw);
  return ch;
}

DomainChart solid_ellipsoid_chart(int n, double a, double b, double c) {
  require_n(n);
  DomainChart ch("solid_ellipsoid", n, [n, a, b, c](const Eigen::VectorXd& w) {
    const int d = 2 * n + 1;
    const ParamBox pb = polar_box(n);
    std::vector<Jet> ang;
    for (int k = 0; k < 2 * n; ++k)
      ang.push_back(Jet::variable(d, 1, k + 1, w[k + 1]) * (pb.hi[k] - pb.lo[k]) + pb.lo[k]);
    const Jet rad = Jet::variable(d, 1, 0, w[0]);
    auto x = polar_direction(ang, n);
    for (int i = 0; i < n; ++i) {
      x[2 * i] = x[2 * i] * rad * a;
      x[2 * i + 1] = x[2 * i + 1] * rad * b;
    }
    x[2 * n] = x[2 * n] * rad * c;
    return x;
  });
  auto aw = polar_axis_weight(n);
  aw.insert(aw.begin(), 1);
  ch.set_axis_weight(aw);
  return ch;
}

DomainChart solid_torus_chart(double R, double r) {
  if (!(R > r && r > 0)) throw std::invalid_argument("torus: need R > r > 0");
  DomainChart ch("solid_torus", 1, [R, r](const Eigen::VectorXd& w) {
    const Jet s = Jet::variable(3, 1, 0, w[0]) * r;
    const Jet u = Jet::variable(3, 1, 1, w[1]) * (2 * kPi);
    const Jet v = Jet::variable(3, 1, 2, w[2]) * (2 * kPi);
    const Jet rho = s * cos(v) + R;
    return std::vector<Jet>{rho * cos(u), rho * sin(u), s * sin(v)};
  });
  ch.set_axis_weight({1, 2, 1});
  return ch;
}

DomainChart box_chart(const Eigen::VectorXd& lo, const Eigen::VectorXd& hi) {
  if (lo.size() != hi.size() || lo.size() % 2 == 0) throw DimensionMismatch("box: need 2n+1 bounds");
  const int n = static_cast<int>(lo.size()) / 2;
  return DomainChart("box", n, [lo, hi](const Eigen::VectorXd& w) {
    const int d = static_cast<int>(w.size());
    std::vector<Jet> x;
    for (int k = 0; k < d; ++k) x.push_back(Jet::variable(d, 1, k, w[k]) * (hi[k] - lo[k]) + lo[k]);
    return x;
  });
}

RayFamily polar_rays(const Eigen::VectorXd& center, double lambda_guess) {
  const int n = static_cast<int>(center.size()) / 2;
  require_n(n);
  RayFamily f;
  f.label = "polar";
  f.n = n;
  f.box = polar_box(n);
  f.lambda_guess = lambda_guess;
  f.axis_weight = polar_axis_weight(n);
  f.exclusions = polar_caps();
  f.rays = [center, n](std::span<const Jet> u) {
    auto dir = polar_direction(u, n);
    std::vector<Jet> base;
    for (std::size_t k = 0; k < dir.size(); ++k) base.push_back(dir[k] * 0.0 + center[static_cast<Eigen::Index>(k)]);
    return std::make_pair(base, dir);
  };
  return f;
}

RayFamily cylinder_rays(int n, double t0, double t1, double lambda_guess) {
  require_n(n);
  RayFamily f;
  f.label = "cylindrical";
  f.n = n;
  const ParamBox h = horizontal_sphere_box(n);
  f.box = {Eigen::VectorXd(2 * n), Eigen::VectorXd(2 * n)};
  f.box.lo << h.lo, t0;
  f.box.hi << h.hi, t1;
  f.lambda_guess = lambda_guess;
  f.axis_weight = n == 1 ? std::vector<int>{2, 1} : std::vector<int>{1, 2, 2, 1};
  f.closed = false;
  f.rays = [n](std::span<const Jet> u) {
    auto dir = horizontal_direction(u.first(2 * n - 1), n);
    dir.push_back(u[0] * 0.0);
    std::vector<Jet> base;
    for (int k = 0; k < 2 * n; ++k) base.push_back(u[0] * 0.0);
    base.push_back(u[2 * n - 1]);
    return std::make_pair(base, dir);
  };
  return f;
}

double solve_ray(const ScalarField& F, const Eigen::VectorXd& base, const Eigen::VectorXd& dir, double s,
                 double guess) {
  double lam = guess;
  for (int it = 0; it < 100; ++it) {
    const Jet j = F.jet(Point::from_coords(base + lam * dir), 1);
    const double slope = j.gradient().dot(dir);
    if (slope == 0.0) break;
    double step = (j.value() - s) / slope;
    const double cap = 0.5 * std::max(std::abs(lam), 1e-3);
    if (std::abs(step) > cap) step = step > 0 ? cap : -cap;
    lam -= step;
    if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(lam))) return lam;
  }
  const double resid = F.jet(Point::from_coords(base + lam * dir), 0).value() - s;
  if (std::abs(resid) > 1e-12) throw std::runtime_error("solve_ray: Newton iteration did not converge");
  return lam;
}

ScalarField shifted(const ScalarField& F, double s) {
  if (s == 0.0) return F;
  ScalarField out(F.label() + " - " + std::to_string(s), F.n(), [F, s](const Point& p, int order) {
    Jet j = F.jet(p, order);
    j += -s;
    return j;
  });
  out.with_max_order(F.max_order());
  return out;
}

SurfaceChart level_set_chart(const ScalarField& F, const RayFamily& rays, double s) {
  SurfaceChart ch(
      "level set of " + F.label(), ImplicitSurface(shifted(F, s)), rays.box,
      [F, rays, s](const Eigen::VectorXd& u) {
        const auto v = variables(u);
        const auto [base, dir] = rays.rays(v);
        const Jet lam = ray_parameter(F, base, dir, s, rays.lambda_guess);
        std::vector<Jet> x;
        for (std::size_t k = 0; k < base.size(); ++k) x.push_back(base[k] + lam * dir[k]);
        return x;
      },
      rays.closed);
  ch.set_axis_weight(rays.axis_weight);
  ch.set_exclusions(rays.exclusions);
  return ch;
}

DomainChart shell_chart(const ScalarField& F, const RayFamily& rays, double s_lo, double s_hi) {
  const int n = rays.n;
  DomainChart ch("shell of " + F.label(), n, [F, rays, s_lo, s_hi, n](const Eigen::VectorXd& w) {
    const int d = 2 * n + 1;
    const auto u = box_variables(w, rays.box);
    const auto [base, dir] = rays.rays(u);
    const Jet lo = ray_parameter(F, base, dir, s_lo, rays.lambda_guess);
    const Jet hi = ray_parameter(F, base, dir, s_hi, rays.lambda_guess);
    const Jet lam = lo + (hi - lo) * Jet::variable(d, 1, d - 1, w[d - 1]);
    std::vector<Jet> x;
    for (std::size_t k = 0; k < base.size(); ++k) x.push_back(base[k] + lam * dir[k]);
    return x;
  });
  auto aw = rays.axis_weight;
  aw.push_back(1);
  ch.set_axis_weight(aw);
  return ch;
}

RayFamily trimmed(const RayFamily& rays, double delta) {
  RayFamily out = rays;
  out.exclusions.clear();
  for (const auto& e : rays.exclusions) {
    if (e.kind != Exclusion::Kind::edge) throw std::invalid_argument("trimmed: only edge exclusions can be cut");
    if (e.upper)
      out.box.hi[e.axis] -= delta;
    else
      out.box.lo[e.axis] += delta;
  }
  return out;
}

CoareaResult coarea_slices(const ScalarField& F, const RayFamily& rays, double s_lo, double s_hi, int sliceCount,
                           const std::function<double(const SurfaceGeometry&)>& psi, const QuadratureSpec& spec) {
  if (sliceCount < 1) throw std::invalid_argument("coarea_slices: need at least one slice");
  const ImplicitSurface level(F);
  CoareaResult out;
  out.lhs = domain_integral(
      shell_chart(F, rays, s_lo, s_hi),
      [&](const Point& p) {
        const SurfaceGeometry g = surface_geometry(level, p, spec.charTol);
        return psi(g) * g.hgrad_norm;
      },
      spec);

  const GaussRule& rule = gauss_legendre(sliceCount);
  const double half = 0.5 * (s_hi - s_lo), mid = 0.5 * (s_hi + s_lo);
  std::vector<std::vector<double>> per_level(spec.levels, std::vector<double>(sliceCount, 0.0));
  for (int k = 0; k < sliceCount; ++k) {
    const double s = mid + half * rule.nodes[k];
    const IntegralResult r = surface_integral(level_set_chart(F, rays, s), psi, Measure::h_perimeter, spec);
    for (const auto& [level, value] : r.refinementTrail) per_level[level][k] = half * rule.weights[k] * value;
  }
  for (int L = 0; L < spec.levels; ++L) out.rhs.refinementTrail.emplace_back(L, pairwise_sum(per_level[L]));
  out.rhs.value = out.rhs.refinementTrail.back().second;
  if (spec.levels > 1)
    out.rhs.errorEstimate = std::abs(out.rhs.value - out.rhs.refinementTrail[spec.levels - 2].second);
  out.rhs.cauchy = is_cauchy(out.rhs.refinementTrail, spec.cauchyFloor);
  return out;
}

}  // namespace heis
