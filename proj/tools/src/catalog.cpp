#include "verify/catalog.hpp"

#include <cctype>
#include <charconv>
#include <tuple>

namespace verify {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

bool is_identifier(const std::string& s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
  return true;
}

double number(const std::string& text, const std::string& where) {
  const std::string s = trim(text);
  double v = 0.0;
  const char* end = s.data() + s.size();
  const auto [p, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || p != end) throw CatalogError(where + ": '" + s + "' is not a number");
  return v;
}

std::vector<double> numbers(const Call& c) {
  std::vector<double> out;
  for (const auto& a : c.args) out.push_back(number(a, c.name));
  return out;
}

void arity(const Call& c, std::size_t k) {
  if (c.args.size() != k)
    throw CatalogError(c.name + ": expected " + std::to_string(k) + " argument(s), got " +
                       std::to_string(c.args.size()));
}

/// Centre from either one scalar (all coordinates) or 2n+1 values, then the radius.
std::pair<Eigen::VectorXd, double> centre_radius(const Call& c, int n) {
  const auto v = numbers(c);
  const int d = 2 * n + 1;
  if (v.size() == 2) return {Eigen::VectorXd::Constant(d, v[0]), v[1]};
  if (static_cast<int>(v.size()) == d + 1) return {Eigen::Map<const Eigen::VectorXd>(v.data(), d), v.back()};
  throw CatalogError(c.name + ": expected (c, r) or " + std::to_string(d) + " centre coordinates and r");
}

std::string names(const std::vector<CatalogEntry>& cat) {
  std::string s;
  for (const auto& e : cat) s += (s.empty() ? "" : ", ") + e.signature;
  return s;
}

[[noreturn]] void unknown(const std::string& kind, const std::string& name, const std::vector<CatalogEntry>& cat) {
  throw CatalogError("unknown " + kind + " '" + name + "'; available: " + names(cat));
}

}  // namespace

Call parse_call(const std::string& text) {
  const std::string s = trim(text);
  Call c;
  const auto open = s.find('(');
  if (open == std::string::npos) {
    c.name = s;
    return c;
  }
  if (s.back() != ')') throw CatalogError("'" + s + "': missing closing parenthesis");
  c.name = trim(s.substr(0, open));
  const std::string inner = s.substr(open + 1, s.size() - open - 2);
  int depth = 0;
  std::string cur;
  for (char ch : inner) {
    if (ch == '(') ++depth;
    if (ch == ')') --depth;
    if (depth < 0) throw CatalogError("'" + s + "': unbalanced parentheses");
    if (ch == ',' && depth == 0) {
      c.args.push_back(trim(cur));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (depth != 0) throw CatalogError("'" + s + "': unbalanced parentheses");
  if (!trim(cur).empty() || !c.args.empty()) c.args.push_back(trim(cur));
  return c;
}

const std::vector<CatalogEntry>& field_catalog() {
  static const std::vector<CatalogEntry> cat{
      {"rho2_half", "|z|^2 / 2"},
      {"two_t", "2t"},
      {"linear(v1, ..., v2n)", "<V, x_H>"},
      {"x1_squared", "x1^2"},
      {"x1y1t", "x1 y1 t"},
      {"exp_cos", "exp(x1) cos(y1)"},
      {"constant(c)", "c"},
      {"coordinate(k)", "k-th coordinate, 0-based, t last"},
      {"euclidean_sphere(c, r)", "|p - c|^2 - r^2"},
      {"ellipsoid(a, b, c)", "sum x^2/a^2 + y^2/b^2 + t^2/c^2 - 1"},
      {"torus(R, r)", "(|z| - R)^2 + t^2 - r^2"},
      {"vertical_cylinder(r)", "|z|^2 - r^2"},
      {"cylinder_distance(r)", "|z| - r"},
      {"<polynomial>", "e.g. \"x1^2 - 0.5*x1*y1*t + 2\""},
  };
  return cat;
}

const std::vector<CatalogEntry>& surface_catalog() {
  static const std::vector<CatalogEntry> cat{
      {"sphere(c, r)", "Euclidean sphere; c is one value for every coordinate or 2n+1 values"},
      {"ellipsoid(a, b, c)", "t-symmetric ellipsoid, polar caps excised"},
      {"torus(R, r)", "torus of revolution about the t-axis (n = 1)"},
      {"cylinder_patch(r, t0, t1)", "vertical cylinder |z| = r between heights t0 and t1 (not closed)"},
  };
  return cat;
}

const std::vector<CatalogEntry>& domain_catalog() {
  static const std::vector<CatalogEntry> cat{
      {"ball_radial(c, r)", "Euclidean ball in radial coordinates"},
      {"solid_ellipsoid(a, b, c)", "region inside ellipsoid(a, b, c)"},
      {"solid_torus(R, r)", "region inside torus(R, r) (n = 1)"},
  };
  return cat;
}

const std::vector<CatalogEntry>& slab_catalog() {
  static const std::vector<CatalogEntry> cat{
      {"slab(sphere(c, r), eps)", "level sets of the normalized sphere along polar rays"},
      {"slab(ellipsoid(a, b, c), eps)", "level sets of the normalized ellipsoid along polar rays"},
      {"slab(cylinder_patch(r, t0, t1), eps)", "level sets of |z| - r between heights t0 and t1"},
  };
  return cat;
}

heis::ScalarField make_field(const std::string& text, int n) {
  using namespace heis::fields;
  const Call c = parse_call(text);
  const auto bare = [&](auto make) {
    arity(c, 0);
    return make(n);
  };
  if (c.name == "rho2_half") return bare(rho2_half);
  if (c.name == "two_t") return bare(two_t);
  if (c.name == "x1_squared") return bare(x1_squared);
  if (c.name == "x1y1t") return bare(x1y1t);
  if (c.name == "exp_cos") return bare(exp_cos);
  if (c.name == "linear" || c.name == "linear_horizontal") {
    arity(c, 2 * n);
    const auto v = numbers(c);
    return linear_horizontal(Eigen::Map<const Eigen::VectorXd>(v.data(), 2 * n));
  }
  if (c.name == "constant") {
    arity(c, 1);
    return constant(n, numbers(c)[0]);
  }
  if (c.name == "coordinate") {
    arity(c, 1);
    return coordinate(n, static_cast<int>(numbers(c)[0]));
  }
  if (c.name == "euclidean_sphere") {
    const auto [ctr, r] = centre_radius(c, n);
    return euclidean_sphere(ctr, r);
  }
  if (c.name == "ellipsoid") {
    arity(c, 3);
    const auto v = numbers(c);
    return ellipsoid(n, v[0], v[1], v[2]);
  }
  if (c.name == "torus") {
    arity(c, 2);
    const auto v = numbers(c);
    return torus(n, v[0], v[1]);
  }
  if (c.name == "vertical_cylinder") {
    arity(c, 1);
    return vertical_cylinder(n, numbers(c)[0]);
  }
  if (c.name == "cylinder_distance") {
    arity(c, 1);
    return cylinder_distance(n, numbers(c)[0]);
  }
  try {
    return heis::parse_polynomial(text, n);
  } catch (const heis::PolynomialParseError& e) {
    // a bare identifier is more likely a misspelt name than a polynomial
    if (is_identifier(c.name) && c.name.size() > 2) unknown("test function", c.name, field_catalog());
    throw CatalogError(e.what());
  }
}

heis::SurfaceChart make_surface(const std::string& text, int n) {
  const Call c = parse_call(text);
  try {
    if (c.name == "sphere") {
      const auto [ctr, r] = centre_radius(c, n);
      return heis::sphere_chart(ctr, r);
    }
    if (c.name == "ellipsoid") {
      arity(c, 3);
      const auto v = numbers(c);
      return heis::ellipsoid_chart(n, v[0], v[1], v[2]);
    }
    if (c.name == "torus") {
      arity(c, 2);
      if (n != 1) throw CatalogError("torus: only n = 1 is available");
      const auto v = numbers(c);
      return heis::torus_chart(v[0], v[1]);
    }
    if (c.name == "cylinder_patch") {
      arity(c, 3);
      const auto v = numbers(c);
      return heis::cylinder_patch_chart(n, v[0], v[1], v[2]);
    }
  } catch (const CatalogError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw CatalogError(e.what());
  }
  unknown("surface", c.name, surface_catalog());
}

heis::DomainChart make_domain(const std::string& text, int n) {
  const Call c = parse_call(text);
  try {
    if (c.name == "ball_radial") {
      const auto [ctr, r] = centre_radius(c, n);
      return heis::ball_chart(ctr, r);
    }
    if (c.name == "solid_ellipsoid") {
      arity(c, 3);
      const auto v = numbers(c);
      return heis::solid_ellipsoid_chart(n, v[0], v[1], v[2]);
    }
    if (c.name == "solid_torus") {
      arity(c, 2);
      if (n != 1) throw CatalogError("solid_torus: only n = 1 is available");
      const auto v = numbers(c);
      return heis::solid_torus_chart(v[0], v[1]);
    }
  } catch (const CatalogError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw CatalogError(e.what());
  }
  unknown("domain", c.name, domain_catalog());
}

Slab make_slab(const std::string& text, int n) {
  const Call c = parse_call(text);
  if (c.name != "slab") unknown("slab", c.name, slab_catalog());
  arity(c, 2);
  Slab s;
  s.epsilon = number(c.args[1], "slab");
  if (!(s.epsilon > 0.0)) throw CatalogError("slab: eps must be positive");
  const Call inner = parse_call(c.args[0]);
  if (inner.name == "sphere" || inner.name == "ellipsoid") {
    const heis::SurfaceChart chart = make_surface(c.args[0], n);
    s.surface = chart.surface();
    Eigen::VectorXd centre = Eigen::VectorXd::Zero(2 * n + 1);
    double guess = 1.0;
    if (inner.name == "sphere") std::tie(centre, guess) = centre_radius(inner, n);
    if (centre.head(2 * n).norm() != 0.0)
      throw CatalogError("slab: the sphere must be centred on the t-axis");
    s.rays = heis::polar_rays(centre, guess);
    return s;
  }
  if (inner.name == "cylinder_patch") {
    arity(inner, 3);
    const auto v = numbers(inner);
    s.surface = heis::ImplicitSurface(heis::fields::cylinder_distance(n, v[0]));
    s.rays = heis::cylinder_rays(n, v[1], v[2], v[0]);
    return s;
  }
  unknown("slab surface", inner.name, slab_catalog());
}

}  // namespace verify
