#include "verify/run.hpp"

#include "verify/catalog.hpp"
#include "verify/report.hpp"

#include <algorithm>
#include <limits>
#include <optional>

namespace verify {

namespace {

using heis::IdentityReport;

/// Catalog objects built lazily, so an identity only needs the keys it uses.
class Inputs {
 public:
  explicit Inputs(const RunConfig& cfg) : cfg_(cfg) {}

  const heis::SurfaceChart& surface() {
    if (!surface_) surface_ = build("surface", [&] { return make_surface(cfg_.surface, cfg_.n); });
    return *surface_;
  }
  const heis::DomainChart& domain() {
    if (!domain_) domain_ = build("domain", [&] { return make_domain(cfg_.domain, cfg_.n); });
    return *domain_;
  }
  const heis::ScalarField& phi() {
    if (!phi_) phi_ = build("testFunction", [&] { return make_field(cfg_.testFunction, cfg_.n); });
    return *phi_;
  }
  const heis::ScalarField& psi() {
    if (!psi_) psi_ = build("secondFunction", [&] { return make_field(cfg_.secondFunction, cfg_.n); });
    return *psi_;
  }
  const Slab& slab() {
    if (!slab_) {
      const std::string field = cfg_.slab ? "slab" : "surface";
      const std::string text =
          cfg_.slab ? *cfg_.slab : "slab(" + cfg_.surface + ", " + format_number(cfg_.foliation.epsilon) + ")";
      slab_ = build(field, [&] { return make_slab(text, cfg_.n); });
    }
    return *slab_;
  }
  Eigen::VectorXd vector() const {
    if (cfg_.vector.empty()) return Eigen::VectorXd::Unit(2 * cfg_.n, 0);
    return Eigen::Map<const Eigen::VectorXd>(cfg_.vector.data(), 2 * cfg_.n);
  }
  std::string slab_text() const {
    return cfg_.slab ? *cfg_.slab : "slab(" + cfg_.surface + ", " + format_number(cfg_.foliation.epsilon) + ")";
  }

 private:
  template <class F>
  auto build(const std::string& field, F make) -> decltype(make()) {
    try {
      return make();
    } catch (const CatalogError& e) {
      throw ConfigError(field, cfg_.line(field), e.what());
    } catch (const std::invalid_argument& e) {
      throw ConfigError(field, cfg_.line(field), e.what());
    }
  }

  const RunConfig& cfg_;
  std::optional<heis::SurfaceChart> surface_;
  std::optional<heis::DomainChart> domain_;
  std::optional<heis::ScalarField> phi_;
  std::optional<heis::ScalarField> psi_;
  std::optional<Slab> slab_;
};

IdentityReport stage_failure(const std::string& tag, const std::string& what) {
  IdentityReport r;
  r.name = tag;
  r.lhs = heis::Side::exact(std::numeric_limits<double>::quiet_NaN());
  r.rhs = heis::Side::exact(std::numeric_limits<double>::quiet_NaN());
  r.residual = r.relResidual = std::numeric_limits<double>::quiet_NaN();
  r.verdict = heis::Verdict::fail;
  r.notes.push_back("stage " + tag + ": " + what);
  return r;
}

/// Replace chart labels with the catalog text the user wrote.
void relabel(std::vector<IdentityReport>& reps, const RunConfig& cfg, const std::string& slab) {
  for (auto& r : reps)
    for (auto& [k, v] : r.inputs) {
      if (k == "surface") v = cfg.surface;
      if (k == "domain") v = cfg.domain;
      if (k == "phi" && v != "2t" && v != "rho^2/2") v = cfg.testFunction;
      if (k == "psi") v = cfg.secondFunction;
      if (k == "rays") v = slab;
    }
}

}  // namespace

RunResult run(const RunConfig& cfg) {
  validate(cfg);
  Inputs in(cfg);
  const double ti = cfg.tolerances.integral;
  const auto tol = [&](const std::string& name, double fallback) { return cfg.tolerances.get(name, fallback); };
  const heis::QuadratureSpec& q = cfg.quadrature;

  // resolve the catalog up front so that typos surface as config errors
  for (const auto& tag : cfg.identities) {
    if (tag == "foliation" || tag == "coarea") {
      in.slab();
      continue;
    }
    if (tag != "c1f" && tag != "mio" && tag != "gd2") in.phi();
    in.surface();
    if (tag == "reilly" || tag == "c0f" || tag == "c2f" || tag == "c3f" || tag == "c4f") in.domain();
    if (tag == "green") in.psi();
  }

  std::optional<std::vector<IdentityReport>> corollaries;
  const auto volume_reports = [&]() -> const std::vector<IdentityReport>& {
    if (!corollaries) {
      const auto vol = heis::oracle_volume(in.domain(), cfg.volumeQuadrature.value_or(q));
      corollaries = heis::volume_corollaries(vol, in.domain().label(), in.surface(), q, ti);
      // per-name tolerance overrides; the verdict is recomputed, extras kept
      for (auto& r : *corollaries) {
        auto redone = heis::make_report(r.name, r.lhs, r.rhs, tol(r.name, ti), r.inputs);
        redone.metadata = std::move(r.metadata);
        redone.notes.insert(redone.notes.end(), r.notes.begin(), r.notes.end());
        r = std::move(redone);
      }
    }
    return *corollaries;
  };
  const auto requested = [&](const char* t) {
    return std::find(cfg.identities.begin(), cfg.identities.end(), t) != cfg.identities.end();
  };
  bool seen_c2f = false, seen_c3f = false;

  RunResult res;
  for (const auto& tag : cfg.identities) {
    std::vector<IdentityReport> reps;
    try {
      if (tag == "pointwise") {
        const auto pts = heis::sample_points(in.surface(), cfg.points, cfg.seed);
        reps.push_back(heis::pointwise_report(in.surface().surface(), in.phi(), pts,
                                              tol("pointwise", cfg.tolerances.pointwise)));
      } else if (tag == "reilly") {
        reps.push_back(heis::reilly_report(in.domain(), in.surface(), in.phi(), q, tol("reilly", ti)));
      } else if (tag == "gd2") {
        heis::HorizontalField X;
        if (cfg.field == "constant")
          X = heis::HorizontalField::constant(in.vector());
        else if (cfg.field == "normal_perp")
          X = heis::HorizontalField::normal_perp(in.surface().surface());
        else
          X = heis::HorizontalField::tangential_gradient(in.surface().surface(), in.phi());
        reps = heis::gd2_report(in.surface(), X, q, tol("gd2", ti));
      } else if (tag == "green") {
        reps = heis::green_report(in.surface(), in.phi(), in.psi(), q, tol("green", ti));
      } else if (tag == "mio") {
        reps.push_back(heis::mio_report(in.surface(), q, tol("mio", ti)));
      } else if (tag == "c0f") {
        reps.push_back(heis::c0f_report(in.domain(), in.surface(), in.phi(), q, tol("c0f", ti)));
      } else if (tag == "c1f") {
        reps.push_back(heis::c1f_report(in.surface(), in.vector(), q, tol("c1f", ti)));
      } else if (tag == "c2f" || tag == "c3f") {
        const bool first_time = !(tag == "c2f" ? seen_c2f : seen_c3f);
        reps.push_back(volume_reports()[tag == "c2f" ? 0 : 1]);
        (tag == "c2f" ? seen_c2f : seen_c3f) = true;
        // the cross-check follows whichever of the two is requested last
        if (first_time && seen_c2f && seen_c3f && requested("c2f") && requested("c3f"))
          reps.push_back(heis::volume_consistency_report(volume_reports()[0], volume_reports()[1]));
      } else if (tag == "c4f") {
        if (cfg.n < 2) throw heis::PreconditionError("c4f: needs n > 1");
        reps.push_back(volume_reports()[2]);
      } else if (tag == "foliation") {
        const Slab& s = in.slab();
        heis::FoliationSpec fol = cfg.foliation;
        fol.epsilon = s.epsilon;
        reps = heis::foliation_report(s.surface, s.rays, fol, q, cfg.tolerances);
      } else if (tag == "coarea") {
        const Slab& s = in.slab();
        const auto F = heis::normalize_defining(s.surface).f();
        reps.push_back(heis::coarea_report(F, s.rays, -s.epsilon, s.epsilon, cfg.foliation.slices, q,
                                           tol("coarea", ti)));
      }
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      reps.assign(1, stage_failure(tag, e.what()));
    }
    relabel(reps, cfg, in.slab_text());
    for (auto& r : reps) res.reports.push_back(std::move(r));
  }
  res.exitCode = exit_code(res.reports);
  return res;
}

}  // namespace verify
