#pragma once

// Randomized property sweeps over every module. Each property draws from its own
// seeded stream, so a suite's report depends only on (suite, seed, trials).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "cr_orbits/classification.hpp"
#include "cr_orbits/congruence.hpp"
#include "cr_orbits/geometry.hpp"
#include "cr_orbits/lie_model.hpp"
#include "cr_orbits/sampling.hpp"
#include "cr_orbits/subspace.hpp"

namespace cr {

struct PropertyResult
{
  std::string name;
  double tolerance = 0.0;
  int trials       = 0;
  int failures     = 0;
  double max_residual = 0.0;
  std::string first_error;  ///< message of the first exception raised by a trial, if any

  void record(double residual)
  {
    ++trials;
    if (!(residual <= tolerance)) { ++failures; }
    if (std::isnan(residual)) {
      max_residual = std::numeric_limits<double>::infinity();
    } else {
      max_residual = std::max(max_residual, residual);
    }
  }

  void check(bool ok) { record(ok ? 0.0 : 1.0); }

  bool passed() const { return failures == 0 && trials > 0; }
};

struct SuiteReport
{
  std::string suite;
  std::uint64_t seed = 0;
  std::vector<PropertyResult> properties;
  std::optional<DisplacementSweep> displacement_sweep;

  bool passed() const
  {
    for (const auto & p : properties) {
      if (!p.passed()) { return false; }
    }
    return true;
  }

  const PropertyResult * find(const std::string & name) const
  {
    for (const auto & p : properties) {
      if (p.name == name) { return &p; }
    }
    return nullptr;
  }
};

struct VerifyOptions
{
  std::uint64_t seed = 42;
  int trials         = 0;  ///< 0 keeps each property's default count
};

inline const std::vector<std::string> & verify_suites()
{
  static const std::vector<std::string> names = {"algebra",  "connection", "curvature", "theoremA",
                                                 "lemmas4x", "congruence", "all"};
  return names;
}

namespace detail {

class SuiteRunner
{
public:
  SuiteRunner(std::string suite, const VerifyOptions & opts) : opts_(opts) { report_.suite = std::move(suite); report_.seed = opts.seed; }

  /// Runs `body` `count` times (or opts.trials) with a stream seeded from (seed, property index).
  void property(const std::string & name, double tol, int count, const std::function<void(Sampler &, PropertyResult &)> & body)
  {
    PropertyResult res;
    res.name      = name;
    res.tolerance = tol;
    Sampler rng(mix(opts_.seed, report_.properties.size()));
    const int n = opts_.trials > 0 ? opts_.trials : count;
    for (int i = 0; i < n; ++i) {
      try {
        body(rng, res);
      } catch (const Error & e) {
        if (res.first_error.empty()) { res.first_error = e.what(); }
        res.record(std::numeric_limits<double>::infinity());
      }
    }
    report_.properties.push_back(std::move(res));
  }

  /// A property evaluated once on a fixed grid, independent of the trial count.
  void fixed(const std::string & name, double tol, const std::function<void(PropertyResult &)> & body)
  {
    PropertyResult res;
    res.name      = name;
    res.tolerance = tol;
    try {
      body(res);
    } catch (const Error & e) {
      res.first_error = e.what();
      res.record(std::numeric_limits<double>::infinity());
    }
    report_.properties.push_back(std::move(res));
  }

  SuiteReport & report() { return report_; }

private:
  static std::uint64_t mix(std::uint64_t seed, std::size_t index)
  {
    // splitmix64 finalizer over seed xor index.
    std::uint64_t z = seed ^ (0x9E3779B97F4A7C15ULL * (index + 1));
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  VerifyOptions opts_;
  SuiteReport report_;
};

inline ModelDim pick_dim(Sampler & rng, std::initializer_list<int> ns)
{
  const int i = rng.integer(0, static_cast<int>(ns.size()) - 1);
  return ModelDim(*(ns.begin() + i));
}

/// Random CR orbit of the given kind on the canonical embedding.
inline std::pair<SubalgebraSpec, StructuredCoords> cr_draw(Sampler & rng, Kind kind, ModelDim dim)
{
  SubalgebraSpec spec = rng.spec(kind, dim);
  StructuredCoords s  = rng.coords(spec, true);
  return {spec, s};
}

inline double mean_sq_numeric(const OrbitQuery & q) { return orbit_invariants(pulled_back_tangent(q)).mean_sq; }

inline AlgVec r_vector(const NormalForm & form, const Eigen::VectorXd & coeffs)
{
  return AlgVec(form.model(), form.r.basis() * coeffs);
}

}  // namespace detail

inline SuiteReport verify_algebra(const VerifyOptions & opts)
{
  detail::SuiteRunner run("algebra", opts);
  for (int n : {2, 3, 4, 6, 8}) {
    const ModelDim dim(n);
    run.property("jacobi_n" + std::to_string(n), 1e-12, 1000, [dim](Sampler & rng, PropertyResult & res) {
      const AlgVec x = rng.algvec(dim), y = rng.algvec(dim), z = rng.algvec(dim);
      const AlgVec jac = bracket(x, bracket(y, z)) + bracket(y, bracket(z, x)) + bracket(z, bracket(x, y));
      res.record(jac.norm() / (1.0 + x.norm() * y.norm() * z.norm()));
    });
  }
  run.property("J_squared_is_minus_identity", 0.0, 200, [](Sampler & rng, PropertyResult & res) {
    const AlgVec x = rng.algvec(detail::pick_dim(rng, {2, 3, 4, 6, 8}));
    res.record((J(J(x)) + x).norm());
  });
  run.property("J_is_isometry", 1e-14, 200, [](Sampler & rng, PropertyResult & res) {
    const ModelDim dim = detail::pick_dim(rng, {2, 3, 4, 6, 8});
    const AlgVec x = rng.algvec(dim), y = rng.algvec(dim);
    res.record(std::abs(inner(J(x), J(y)) - inner(x, y)));
  });
  run.property("Z_central_in_n", 0.0, 200, [](Sampler & rng, PropertyResult & res) {
    const ModelDim dim = detail::pick_dim(rng, {2, 3, 4, 6, 8});
    AlgVec v           = rng.algvec(dim);
    Eigen::VectorXd c  = v.coords();
    c(0)               = 0.0;
    res.record(bracket(AlgVec::Z(dim), AlgVec(dim, c)).norm());
  });
  run.property("adjoint_matches_series", 1e-9, 1000, [](Sampler & rng, PropertyResult & res) {
    const ModelDim dim   = detail::pick_dim(rng, {2, 3, 4, 6, 8});
    const GroupElement g = rng.element(dim, 2.0);
    const AlgVec y       = rng.algvec(dim);
    res.record(relative_residual(adjoint(g, y), adjoint_series_oracle(g, y, 40)));
  });
  run.property("adjoint_is_automorphism", 1e-10, 500, [](Sampler & rng, PropertyResult & res) {
    const ModelDim dim   = detail::pick_dim(rng, {2, 3, 4, 6, 8});
    const GroupElement g = rng.element(dim, 2.0);
    const AlgVec x = rng.algvec(dim), y = rng.algvec(dim);
    res.record(relative_residual(adjoint(g, bracket(x, y)), bracket(adjoint(g, x), adjoint(g, y))));
  });
  run.property("adjoint_is_homomorphism", 1e-10, 1000, [](Sampler & rng, PropertyResult & res) {
    const ModelDim dim    = detail::pick_dim(rng, {2, 3, 4, 6, 8});
    const GroupElement g1 = rng.element(dim, 2.0), g2 = rng.element(dim, 2.0);
    const AlgVec y        = rng.algvec(dim);
    res.record(relative_residual(adjoint(g1 * g2, y), adjoint(g1, adjoint(g2, y))));
  });
  run.property("group_inverse", 1e-10, 500, [](Sampler & rng, PropertyResult & res) {
    const GroupElement g = rng.element(detail::pick_dim(rng, {2, 3, 4, 6, 8}), 2.0);
    res.record(std::max((g * group_inverse(g)).xi().norm(), (group_inverse(g) * g).xi().norm()));
  });
  run.property("group_associative", 1e-10, 500, [](Sampler & rng, PropertyResult & res) {
    const ModelDim dim = detail::pick_dim(rng, {2, 3, 4, 6, 8});
    const GroupElement a = rng.element(dim), b = rng.element(dim), c = rng.element(dim);
    res.record(relative_residual(((a * b) * c).xi(), (a * (b * c)).xi()));
  });
  run.property("heisenberg_product", 1e-12, 500, [](Sampler & rng, PropertyResult & res) {
    const ModelDim dim = detail::pick_dim(rng, {2, 3, 4, 6, 8});
    const AlgVec U = rng.algvec(dim).alpha_part(), V = rng.algvec(dim).alpha_part();
    const AlgVec expected = U + V + (0.5 * inner(J(U), V)) * AlgVec::Z(dim);
    res.record(relative_residual((GroupElement::exp(U) * GroupElement::exp(V)).xi(), expected));
  });
  return std::move(run.report());
}

inline SuiteReport verify_connection(const VerifyOptions & opts)
{
  detail::SuiteRunner run("connection", opts);
  run.property("levi_civita_matches_koszul", 1e-12, 1000, [](Sampler & rng, PropertyResult & res) {
    const ModelDim dim = detail::pick_dim(rng, {2, 3, 4, 6, 8});
    const AlgVec x = rng.algvec(dim), y = rng.algvec(dim);
    res.record((levi_civita(x, y) - koszul_oracle(x, y)).norm() / (1.0 + x.norm() * y.norm()));
  });
  run.property("torsion_free", 1e-12, 1000, [](Sampler & rng, PropertyResult & res) {
    const ModelDim dim = detail::pick_dim(rng, {2, 3, 4, 6, 8});
    const AlgVec x = rng.algvec(dim), y = rng.algvec(dim);
    res.record((levi_civita(x, y) - levi_civita(y, x) - bracket(x, y)).norm() / (1.0 + x.norm() * y.norm()));
  });
  run.property("metric_compatible", 1e-12, 1000, [](Sampler & rng, PropertyResult & res) {
    const ModelDim dim = detail::pick_dim(rng, {2, 3, 4, 6, 8});
    const AlgVec x = rng.algvec(dim), y = rng.algvec(dim), z = rng.algvec(dim);
    res.record(std::abs(inner(levi_civita(x, y), z) + inner(y, levi_civita(x, z)))
               / (1.0 + x.norm() * y.norm() * z.norm()));
  });
  return std::move(run.report());
}

inline SuiteReport verify_curvature(const VerifyOptions & opts)
{
  detail::SuiteRunner run("curvature", opts);
  for (int n : {2, 3, 4, 6, 8}) {
    const ModelDim dim(n);
    run.property("holomorphic_sectional_n" + std::to_string(n), 1e-9, 100, [dim](Sampler & rng, PropertyResult & res) {
      const AlgVec x = rng.unit_algvec(dim);
      res.record(std::abs(inner(curvature(x, J(x), J(x)), x) + 1.0));
    });
  }
  run.fixed("holomorphic_plane_B_Z", 1e-15, [](PropertyResult & res) {
    const ModelDim dim(3);
    const AlgVec B = AlgVec::B(dim), Z = AlgVec::Z(dim);
    res.record(std::abs(inner(curvature(B, Z, Z), B) + 1.0));
  });
  return std::move(run.report());
}

inline SuiteReport verify_cr_criterion(const VerifyOptions & opts)
{
  detail::SuiteRunner run("theoremA", opts);
  for (Kind kind : kAllKinds) {
    const std::string k = to_string(kind);
    run.property("membership_agrees_" + k, 0.0, 200, [kind](Sampler & rng, PropertyResult & res) {
      const ModelDim dim      = detail::pick_dim(rng, {2, 3, 4, 6});
      const SubalgebraSpec sp = rng.spec(kind, dim);
      const bool want_cr      = !has_non_cr_orbits(sp) || rng.coin();
      const GroupElement g    = from_structured(sp, rng.coords(sp, want_cr));
      // classify_orbit throws InternalInconsistency if the two routes disagree.
      const OrbitReport rep = classify_orbit(make_query(sp, g));
      res.check(rep.is_cr == want_cr);
    });
    run.property("membership_agrees_random_g_" + k, 0.0, 200, [kind](Sampler & rng, PropertyResult & res) {
      const ModelDim dim      = detail::pick_dim(rng, {2, 3, 4, 6});
      const SubalgebraSpec sp = rng.spec(kind, dim);
      // Near g = e the deciding slice component can fall between the two routes' tolerances.
      const OrbitReport rep   = classify_orbit(make_query(sp, rng.element(dim, 2.0, 0.1)));
      res.check(rep.is_cr == rep.membership.is_cr);
    });
    run.property("slice_roundtrip_" + k, 1e-10, 200, [kind](Sampler & rng, PropertyResult & res) {
      const ModelDim dim      = detail::pick_dim(rng, {2, 3, 4, 6});
      const SubalgebraSpec sp = rng.spec(kind, dim);
      const GroupElement g    = rng.element(dim);
      const SliceDecomposition sd = slice_reduce(sp, g);
      res.record(relative_residual((GroupElement::exp(sd.x_h) * sd.slice_point()).xi(), g.xi()));
    });
    run.property("slice_orthogonal_" + k, 1e-12, 200, [kind](Sampler & rng, PropertyResult & res) {
      const ModelDim dim      = detail::pick_dim(rng, {2, 3, 4, 6});
      const SubalgebraSpec sp = rng.spec(kind, dim);
      const NormalForm form   = canonical_form(sp);
      const SliceDecomposition sd = slice_reduce(form, rng.element(dim));
      const Subspace h = form.algebra();
      double worst     = 0.0;
      for (const AlgVec & e : h.vectors()) { worst = std::max(worst, std::abs(inner(sd.y, e))); }
      res.record(worst);
      res.check(contains(h, sd.x_h, 1e-12));
    });
    run.property("normalize_pulled_back_" + k, 0.0, 100, [kind](Sampler & rng, PropertyResult & res) {
      const ModelDim dim           = detail::pick_dim(rng, {2, 3, 4, 6});
      auto [sp, s]                 = detail::cr_draw(rng, kind, dim);
      const Subspace h             = adjoint_image(group_inverse(from_structured(sp, s)), build_subalgebra(sp));
      const Normalization norm     = normalize_subalgebra(h);
      res.check(norm.form.spec == sp);
    });
  }
  run.property("normalize_canonical_identity", 1e-12, 100, [](Sampler & rng, PropertyResult & res) {
    const ModelDim dim      = detail::pick_dim(rng, {2, 3, 4, 6});
    const SubalgebraSpec sp = rng.spec(kAllKinds[rng.integer(0, 3)], dim);
    const Normalization norm = normalize_subalgebra(build_subalgebra(sp));
    res.check(norm.form.spec == sp);
    res.record(norm.g.xi().norm());
  });
  run.property("adjoint_image_r", 1e-9, 200, [](Sampler & rng, PropertyResult & res) {
    const ModelDim dim      = detail::pick_dim(rng, {2, 3, 4, 6});
    auto [sp, s]            = detail::cr_draw(rng, Kind::R, dim);
    const NormalForm form   = canonical_form(sp);
    const AlgVec T          = detail::r_vector(form, s.T);
    Subspace expected       = form.r;
    if (T.norm() > 0.0) {
      expected = direct_sum(relative_complement(form.r, orthonormalize(dim, {T})),
                            orthonormalize(dim, {T - (rho(s.b / 2.0) * T.squared_norm()) * AlgVec::Z(dim)}));
    }
    res.record(projector_distance(adjoint_image(from_structured(sp, s), form.algebra()), expected));
  });
  run.property("adjoint_image_ar", 1e-9, 200, [](Sampler & rng, PropertyResult & res) {
    const ModelDim dim      = detail::pick_dim(rng, {2, 3, 4, 6});
    const SubalgebraSpec sp = rng.spec(Kind::AR, dim);
    StructuredCoords s      = rng.coords(sp, !has_non_cr_orbits(sp) || rng.coin());
    s.b                     = 0.0;
    const NormalForm form   = canonical_form(sp);
    const AlgVec T          = detail::r_vector(form, s.T);
    const AlgVec W(dim, canonical_cprime(sp).basis() * s.W);
    const AlgVec B = AlgVec::B(dim), Z = AlgVec::Z(dim);
    // g = Exp(2JT + 2W + yZ).
    StructuredCoords s2 = s;
    s2.T *= 2.0;
    s2.W *= 2.0;
    Subspace expected = direct_sum(orthonormalize(dim, {B - J(T) - W - s.y * Z}), form.r);
    if (T.norm() > 0.0) {
      expected = direct_sum(orthonormalize(dim, {B - J(T) - W - s.y * Z, T - (2.0 * T.squared_norm()) * Z}),
                            relative_complement(form.r, orthonormalize(dim, {T})));
    }
    res.record(projector_distance(adjoint_image(from_structured(sp, s2), form.algebra()), expected));
  });
  run.property("adjoint_image_acrz", 1e-9, 200, [](Sampler & rng, PropertyResult & res) {
    const ModelDim dim      = detail::pick_dim(rng, {2, 3, 4, 6});
    const SubalgebraSpec sp = rng.spec(Kind::ACRZ, dim);
    StructuredCoords s      = rng.coords(sp, !has_non_cr_orbits(sp) || rng.coin());
    s.b                     = 0.0;
    s.y                     = 0.0;
    const NormalForm form   = canonical_form(sp);
    const AlgVec T          = detail::r_vector(form, s.T);
    const AlgVec W(dim, canonical_cprime(sp).basis() * s.W);
    StructuredCoords s2 = s;
    s2.T *= 2.0;
    s2.W *= 2.0;
    const Subspace expected = direct_sum(
      direct_sum(orthonormalize(dim, {AlgVec::B(dim) - J(T) - W}), direct_sum(form.c, form.r)), center(dim));
    res.record(projector_distance(adjoint_image(from_structured(sp, s2), form.algebra()), expected));
  });
  return std::move(run.report());
}

inline SuiteReport verify_closed_forms(const VerifyOptions & opts)
{
  detail::SuiteRunner run("lemmas4x", opts);
  for (Kind kind : kAllKinds) {
    const std::string k = to_string(kind);
    run.property("closed_form_mean_sq_" + k, 1e-9, 100, [kind](Sampler & rng, PropertyResult & res) {
      const ModelDim dim = detail::pick_dim(rng, {2, 3, 4, 6});
      auto [sp, s]       = detail::cr_draw(rng, kind, dim);
      const OrbitQuery q = make_query(sp, from_structured(sp, s));
      res.record(std::abs(closed_form_invariants(q.form, q.g).mean_sq - detail::mean_sq_numeric(q)));
    });
    run.property("mean_sq_bounded_by_trace_" + k, 1e-12, 100, [kind](Sampler & rng, PropertyResult & res) {
      const ModelDim dim = detail::pick_dim(rng, {2, 3, 4, 6});
      auto [sp, s]       = detail::cr_draw(rng, kind, dim);
      const Subspace t   = pulled_back_tangent(make_query(sp, from_structured(sp, s)));
      const ExtrinsicInvariants inv = orbit_invariants(t);
      res.record(std::max(0.0, inv.mean_sq - static_cast<double>(t.dim()) * *inv.second_fundamental_sq));
    });
  }
  run.property("closed_form_second_fundamental_AR", 1e-9, 100, [](Sampler & rng, PropertyResult & res) {
    const ModelDim dim = detail::pick_dim(rng, {2, 3, 4, 6});
    auto [sp, s]       = detail::cr_draw(rng, Kind::AR, dim);
    const OrbitQuery q = make_query(sp, from_structured(sp, s));
    const double closed  = *closed_form_invariants(q.form, q.g).second_fundamental_sq;
    const double numeric = *orbit_invariants(pulled_back_tangent(q)).second_fundamental_sq;
    res.record(std::abs(closed - numeric));
  });
  run.property("invariant_pair_matches_differences", 1e-12, 500, [](Sampler & rng, PropertyResult & res) {
    const ModelDim dim(rng.integer(2, 8));
    const SubalgebraSpec sp = rng.spec(Kind::AR, dim);
    const double w = rng.uniform(0.0, 2.0), y = rng.uniform(-2.0, 2.0);
    auto [m, ii]   = invariants_kind_ar(w, y, sp.dim_r);
    auto [d1, d2]  = kind_ar_invariant_pair(sp, w, y);
    res.record(std::max(std::abs(d1 - (m - ii)), std::abs(d2 - ((sp.dim_r + 1) * ii - m))));
  });
  run.property("ar_frame_orthonormal", 1e-12, 500, [](Sampler & rng, PropertyResult & res) {
    const ModelDim dim = detail::pick_dim(rng, {2, 3, 4, 6});
    const AlgVec W(dim, rng.algvec(dim).alpha_part().coords().normalized() * rng.uniform(0.05, 2.0));
    const KindArFrame f = kind_ar_frame(W, rng.uniform(-2.0, 2.0));
    const AlgVec v[]    = {f.X, f.xi1, *f.xi2};
    double worst        = 0.0;
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) { worst = std::max(worst, std::abs(inner(v[i], v[j]) - (i == j ? 1.0 : 0.0))); }
    }
    res.record(worst);
  });
  run.fixed("anchor_values", 1e-12, [](PropertyResult & res) {
    for (int n : {2, 3, 4, 6}) {
      const ModelDim dim(n);
      for (Kind kind : kAllKinds) {
        for (const SubalgebraSpec & sp : Sampler::all_specs(kind, dim)) {
          const double numeric = detail::mean_sq_numeric(make_query(sp, GroupElement::identity(dim)));
          double anchor        = 0.0;
          if (kind == Kind::R) { anchor = sp.dim_r * sp.dim_r / 4.0; }
          if (kind == Kind::CRZ) { anchor = mean_sq_kind_crz(2 * sp.dim_c + sp.dim_r); }
          res.record(std::abs(numeric - anchor));
          if (kind == Kind::AR) {
            res.record(*orbit_invariants(build_subalgebra(sp)).second_fundamental_sq);
          }
        }
      }
    }
  });
  return std::move(run.report());
}

inline SuiteReport verify_congruence(const VerifyOptions & opts)
{
  detail::SuiteRunner run("congruence", opts);
  run.fixed("h_strictly_increasing", 0.0, [](PropertyResult & res) {
    for (int r = 1; r <= 8; ++r) {
      double prev = h_profile(0.0, r);
      for (int i = 1; i < 10000; ++i) {
        const double t   = 50.0 * i / 9999.0;
        const double cur = h_profile(t, r);
        res.check(cur > prev && h_profile_derivative(t, r) > 0.0);
        prev = cur;
      }
    }
  });
  run.property("f_inverse_roundtrip", 1e-9, 1000, [](Sampler & rng, PropertyResult & res) {
    for (double a : {5.0, 7.0, 11.0}) {
      const double z = rng.uniform(0.0, 3.0), w = rng.uniform(0.0, 3.0);
      auto [c1, c2]  = f_profile(z, w, a);
      auto [zr, wr]  = f_profile_inverse(c1, c2, a);
      res.record(std::max(std::abs(zr - z), std::abs(wr - w)));
    }
  });
  run.property("h_inverse_roundtrip", 1e-9, 1000, [](Sampler & rng, PropertyResult & res) {
    const int r    = rng.integer(1, 8);
    const double t = rng.uniform(0.0, 10.0);
    res.record(std::abs(h_profile_inverse(h_profile(t, r), r) - t) / (1.0 + t));
  });
  run.property("kind_I_key_matches_mean_curvature", 1e-9, 100, [](Sampler & rng, PropertyResult & res) {
    const ModelDim dim   = detail::pick_dim(rng, {2, 3, 4, 6});
    auto [sp, s]         = detail::cr_draw(rng, Kind::R, dim);
    const OrbitQuery q   = make_query(sp, from_structured(sp, s));
    const double iota    = congruence_key(q).scalars.at(0);
    res.record(std::abs(h_profile(iota * iota, sp.dim_r) - detail::mean_sq_numeric(q)));
  });
  for (Kind kind : kAllKinds) {
    const std::string k = to_string(kind);
    run.property("congruent_pairs_equal_mean_sq_" + k, 1e-9, 50, [kind](Sampler & rng, PropertyResult & res) {
      const ModelDim dim  = detail::pick_dim(rng, {2, 3, 4, 6});
      auto [sp, s1]       = detail::cr_draw(rng, kind, dim);
      const OrbitQuery q1 = make_query(sp, from_structured(sp, s1));
      const CongruenceKey k1 = congruence_key(q1);
      const OrbitQuery q2 = make_query(sp, from_structured(sp, rng.coords_with_key(sp, k1.scalars)));
      res.check(are_congruent(q1, q2).congruent);
      res.record(std::abs(detail::mean_sq_numeric(q1) - detail::mean_sq_numeric(q2)));
    });
  }
  run.property("separated_pairs_I", 1e-6, 50, [](Sampler & rng, PropertyResult & res) {
    const ModelDim dim = detail::pick_dim(rng, {2, 3, 4, 6});
    const SubalgebraSpec sp = rng.spec(Kind::R, dim);
    const OrbitQuery q1 = make_query(sp, from_structured(sp, rng.coords(sp)));
    const OrbitQuery q2 = make_query(sp, from_structured(sp, rng.coords(sp)));
    const CongruenceDecision d = are_congruent(q1, q2);
    if (d.congruent) { return; }
    const double i1 = std::sqrt(h_profile_inverse(detail::mean_sq_numeric(q1), sp.dim_r));
    const double i2 = std::sqrt(h_profile_inverse(detail::mean_sq_numeric(q2), sp.dim_r));
    res.record(std::max(std::abs(i1 - d.key1.scalars[0]), std::abs(i2 - d.key2.scalars[0])));
    res.check(std::abs(i1 - i2) > kKeyTol);
  });
  run.property("separated_pairs_III", 1e-6, 50, [](Sampler & rng, PropertyResult & res) {
    const ModelDim dim = detail::pick_dim(rng, {2, 3, 4, 6});
    SubalgebraSpec sp  = rng.spec(Kind::AR, dim);
    sp.dim_r           = std::max(1, sp.dim_r);  // the F-inverse certificate needs r >= 1
    const OrbitQuery q1 = make_query(sp, from_structured(sp, rng.coords(sp)));
    const OrbitQuery q2 = make_query(sp, from_structured(sp, rng.coords(sp)));
    const CongruenceDecision d = are_congruent(q1, q2);
    if (d.congruent) { return; }
    const ExtrinsicInvariants e1 = orbit_invariants(pulled_back_tangent(q1));
    const ExtrinsicInvariants e2 = orbit_invariants(pulled_back_tangent(q2));
    auto [w1, y1] = recover_kind_ar_parameters(e1.mean_sq, *e1.second_fundamental_sq, sp.dim_r);
    auto [w2, y2] = recover_kind_ar_parameters(e2.mean_sq, *e2.second_fundamental_sq, sp.dim_r);
    res.record(std::max({std::abs(w1 - d.key1.scalars[0]), std::abs(y1 - d.key1.scalars[1]),
                         std::abs(w2 - d.key2.scalars[0]), std::abs(y2 - d.key2.scalars[1])}));
    res.check(std::max(std::abs(w1 - w2), std::abs(y1 - y2)) > kKeyTol);
  });
  run.property("separated_pairs_IV", 1e-6, 50, [](Sampler & rng, PropertyResult & res) {
    const ModelDim dim = detail::pick_dim(rng, {2, 3, 4, 6});
    const SubalgebraSpec sp = rng.spec(Kind::ACRZ, dim);
    const OrbitQuery q1 = make_query(sp, from_structured(sp, rng.coords(sp)));
    const OrbitQuery q2 = make_query(sp, from_structured(sp, rng.coords(sp)));
    const CongruenceDecision d = are_congruent(q1, q2);
    if (d.congruent) { return; }
    const int k  = 2 * sp.dim_c + sp.dim_r;
    const double t1 = std::sqrt(acrz_profile_inverse(detail::mean_sq_numeric(q1), k));
    const double t2 = std::sqrt(acrz_profile_inverse(detail::mean_sq_numeric(q2), k));
    res.record(std::max(std::abs(t1 - d.key1.scalars[0]), std::abs(t2 - d.key2.scalars[0])));
    res.check(std::abs(t1 - t2) > kKeyTol);
  });
  run.property("kind_II_all_congruent", 0.0, 100, [](Sampler & rng, PropertyResult & res) {
    const ModelDim dim      = detail::pick_dim(rng, {2, 3, 4, 6});
    const SubalgebraSpec sp = rng.spec(Kind::CRZ, dim);
    res.check(are_congruent(make_query(sp, rng.element(dim)), make_query(sp, rng.element(dim))).congruent);
  });
  run.property("kind_III_sign_symmetry", 0.0, 100, [](Sampler & rng, PropertyResult & res) {
    const ModelDim dim = detail::pick_dim(rng, {2, 3, 4, 6});
    auto [sp, s]       = detail::cr_draw(rng, Kind::AR, dim);
    s.b                = 0.0;
    StructuredCoords m = s;
    m.y                = -s.y;
    const CongruenceKey k1 = congruence_key(make_query(sp, from_structured(sp, s)));
    const CongruenceKey k2 = congruence_key(make_query(sp, from_structured(sp, m)));
    res.check(k1.scalars == k2.scalars);
  });
  run.property("cross_kind_never_congruent", 0.0, 20, [](Sampler & rng, PropertyResult & res) {
    const ModelDim dim = detail::pick_dim(rng, {2, 3, 4, 6});
    for (Kind k1 : kAllKinds) {
      for (Kind k2 : kAllKinds) {
        if (k1 == k2) { continue; }
        auto [sp1, s1] = detail::cr_draw(rng, k1, dim);
        auto [sp2, s2] = detail::cr_draw(rng, k2, dim);
        res.check(!are_congruent(make_query(sp1, from_structured(sp1, s1)), make_query(sp2, from_structured(sp2, s2)))
                     .congruent);
      }
    }
  });
  run.property("key_invariant_under_reembedding", 1e-9, 50, [](Sampler & rng, PropertyResult & res) {
    const ModelDim dim = detail::pick_dim(rng, {3, 4, 6});
    auto [sp, s]       = detail::cr_draw(rng, kAllKinds[rng.integer(0, 3)], dim);
    // A permutation of the complex coordinates of g_alpha is a unitary map fixing B and Z,
    // hence an isometry commuting with J and the bracket.
    std::vector<int> perm(static_cast<std::size_t>(dim.alpha_dim()));
    for (std::size_t i = 0; i < perm.size(); ++i) { perm[i] = static_cast<int>(i); }
    std::shuffle(perm.begin(), perm.end(), rng.engine());
    auto permute = [&](const AlgVec & x) {
      Eigen::VectorXd c = x.coords();
      for (int k = 0; k < dim.alpha_dim(); ++k) {
        c(dim.alpha_index(perm[k], false)) = x.coords()(dim.alpha_index(k, false));
        c(dim.alpha_index(perm[k], true))  = x.coords()(dim.alpha_index(k, true));
      }
      return AlgVec(dim, c);
    };
    const GroupElement g   = from_structured(sp, s);
    const CongruenceKey k0 = congruence_key(make_query(sp, g));
    const OrbitQuery moved = make_query(transform(build_subalgebra(sp), permute), GroupElement::exp(permute(g.xi())));
    const CongruenceKey k1 = congruence_key(moved);
    res.check(k0.kind == k1.kind && k0.dim_c == k1.dim_c && k0.dim_r == k1.dim_r);
    double worst = 0.0;
    for (std::size_t i = 0; i < k0.scalars.size() && i < k1.scalars.size(); ++i) {
      worst = std::max(worst, std::abs(k0.scalars[i] - k1.scalars[i]));
    }
    res.record(worst);
  });

  const DisplacementSweep sweep = sweep_displacement_forms();
  run.fixed("kind_I_exactly_one_candidate_consistent", 0.0, [&sweep](PropertyResult & res) {
    // The two candidates are the cross-indexed and the rho-product forms.
    int consistent = 0;
    for (const auto & e : sweep.entries) {
      if (e.form != DisplacementForm::RhoReflected && e.consistent) { ++consistent; }
    }
    res.check(consistent == 1);
  });
  run.fixed("kind_I_selected_form_matches_oracle", kKeyTol, [&sweep](PropertyResult & res) {
    for (const auto & e : sweep.entries) {
      if (e.form == DisplacementForm::RhoReflected) { res.record(e.max_mean_sq_residual); }
    }
  });
  run.report().displacement_sweep = sweep;
  return std::move(run.report());
}

inline std::vector<SuiteReport> run_verify(const std::string & suite, const VerifyOptions & opts)
{
  std::vector<SuiteReport> out;
  const bool all = suite == "all";
  if (all || suite == "algebra") { out.push_back(verify_algebra(opts)); }
  if (all || suite == "connection") { out.push_back(verify_connection(opts)); }
  if (all || suite == "curvature") { out.push_back(verify_curvature(opts)); }
  if (all || suite == "theoremA") { out.push_back(verify_cr_criterion(opts)); }
  if (all || suite == "lemmas4x") { out.push_back(verify_closed_forms(opts)); }
  if (all || suite == "congruence") { out.push_back(verify_congruence(opts)); }
  if (out.empty()) { throw InvalidInput("unknown verification suite '" + suite + "'"); }
  return out;
}

}  // namespace cr
