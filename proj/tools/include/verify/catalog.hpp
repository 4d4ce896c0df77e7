#pragma once

#include "heisenberg/charts.hpp"
#include "heisenberg/field.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace verify {

/// "name(arg, arg, ...)" split at top-level commas; a bare name has no args.
struct Call {
  std::string name;
  std::vector<std::string> args;
};
Call parse_call(const std::string& text);

class CatalogError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A named test function, or a polynomial in x_i, y_i, t.
heis::ScalarField make_field(const std::string& text, int n);
heis::SurfaceChart make_surface(const std::string& text, int n);
heis::DomainChart make_domain(const std::string& text, int n);

/// slab(surface, eps): the level-set family around a catalog surface.
struct Slab {
  heis::ImplicitSurface surface;
  heis::RayFamily rays;
  double epsilon = 0.0;
};
Slab make_slab(const std::string& text, int n);

struct CatalogEntry {
  std::string signature;
  std::string description;
};
const std::vector<CatalogEntry>& field_catalog();
const std::vector<CatalogEntry>& surface_catalog();
const std::vector<CatalogEntry>& domain_catalog();
const std::vector<CatalogEntry>& slab_catalog();

}  // namespace verify
