#pragma once

// Congruence of CR orbits: per-kind scalar keys, the decision procedure, the
// injectivity profiles that certify the keys are complete invariants, and the
// moduli space of congruence classes.

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cr_orbits/classification.hpp"
#include "cr_orbits/geometry.hpp"
#include "cr_orbits/lie_model.hpp"

namespace cr {

/// Absolute tolerance when comparing key scalars.
inline constexpr double kKeyTol = 1e-9;

// Injectivity profiles ---------------------------------------------------------

/// h(t) = (4t + (r + (r+1)t)^2) / (4(1+t)^2): ||H||^2 of the kind-R orbit through Exp(JT), t = ||T||^2.
inline double h_profile(double t, int r) { return mean_sq_kind_r(t, r); }

/// h'(t) = (2 + r + (r-1)t) / (2(1+t)^3) > 0.
inline double h_profile_derivative(double t, int r) { return (2.0 + r + (r - 1) * t) / (2.0 * std::pow(1.0 + t, 3)); }

/// Inverse of h on [0, inf). h maps onto [r^2/4, (r+1)^2/4).
inline double h_profile_inverse(double value, int r)
{
  if (r < 1) { throw InvalidInput("h_profile_inverse: r must be >= 1"); }
  const double lo_val = h_profile(0.0, r);
  if (value <= lo_val) { return 0.0; }
  if (value >= (r + 1.0) * (r + 1.0) / 4.0) { throw InvalidInput("h_profile_inverse: value outside the range of h"); }
  // Roots of ((r+1)^2 - 4v) t^2 + (4 + 2r(r+1) - 8v) t + (r^2 - 4v) = 0; the leading coefficient is
  // positive and the constant term negative, so exactly one root is positive.
  const double A = (r + 1.0) * (r + 1.0) - 4.0 * value;
  const double B = 4.0 + 2.0 * r * (r + 1.0) - 8.0 * value;
  const double C = r * static_cast<double>(r) - 4.0 * value;
  const double disc = std::sqrt(std::max(0.0, B * B - 4.0 * A * C));
  // Positive root, written to avoid cancellation.
  double t = (B <= 0.0) ? (-B + disc) / (2.0 * A) : (-2.0 * C) / (B + disc);
  // One Newton step polishes the last bits.
  t -= (h_profile(t, r) - value) / h_profile_derivative(t, r);
  return std::max(0.0, t);
}

/// F(z, w) = ((z+w)/(1+z+w), z(a(1+z) + (a+3)w)/(1+z+w)^2) for z, w >= 0 and a >= 5.
inline std::pair<double, double> f_profile(double z, double w, double a)
{
  const double s = 1.0 + z + w;
  return {(z + w) / s, z * (a * (1.0 + z) + (a + 3.0) * w) / (s * s)};
}

/// The admissible root of F(z, w) = (c1, c2): the other root has w < 0 whenever a >= 5.
inline std::pair<double, double> f_profile_inverse(double c1, double c2, double a)
{
  if (a < 5.0) { throw InvalidInput("f_profile_inverse: requires a >= 5"); }
  if (c1 < 0.0 || c1 >= 1.0) { throw InvalidInput("f_profile_inverse: first component must lie in [0, 1)"); }
  const double disc = std::sqrt(std::max(0.0, (a + 3.0 * c1) * (a + 3.0 * c1) - 12.0 * c2));
  // z = (a + 3c1 - disc) / den, written as c2-proportional to avoid cancellation when c2 is small.
  const double z = (2.0 * c2 / (1.0 - c1)) / (a + 3.0 * c1 + disc);
  const double w = c1 / (1.0 - c1) - z;
  return {z, std::max(0.0, w)};
}

/// Inverse of t -> t k^2 / (4(4+t)) with k = 3 + dim(c + r): recovers ||T||^2 of a kind-ACRZ orbit.
inline double acrz_profile_inverse(double mean_sq, int real_dim_cr)
{
  const double k2 = std::pow(3.0 + real_dim_cr, 2);
  if (mean_sq < 0.0 || 4.0 * mean_sq >= k2) { throw InvalidInput("acrz_profile_inverse: value outside the range"); }
  return 16.0 * mean_sq / (k2 - 4.0 * mean_sq);
}

/// Recovers (||W||, |y|) of a kind-AR orbit through Exp(W + yZ) from (||H||^2, ||II||^2) when r >= 1,
/// through the two invariant combinations and the inverse of F with a = 3 + 2r.
inline std::pair<double, double> recover_kind_ar_parameters(double mean_sq, double ii_sq, int r)
{
  if (r < 1) { throw InvalidInput("recover_kind_ar_parameters: needs r >= 1"); }
  const double c1 = 4.0 * (mean_sq - ii_sq) / (r * (1.0 + r));
  const double c2 = 4.0 * ((r + 1.0) * ii_sq - mean_sq) / r;
  auto [z, w]     = f_profile_inverse(std::max(0.0, c1), std::max(0.0, c2), 3.0 + 2.0 * r);
  // The closed forms use Exp(2W + yZ), so W there is half of the slice component.
  return {2.0 * std::sqrt(w), std::sqrt(z)};
}

/// 3 + 2(r-1)(1+t): vanishes iff a kind-R orbit (dim r, t = ||T'||^2) and a kind-CRZ orbit with
/// c = 0, dim r - 1 have equal ||H||^2. It is positive for all r >= 1, t >= 0.
inline double type_i_ii_gap(int r, double t) { return 3.0 + 2.0 * (r - 1) * (1.0 + t); }

// Keys -----------------------------------------------------------------------

inline CongruenceKey congruence_key(const OrbitQuery & q)
{
  const MembershipVerdict m = membership_predicate(q.form, q.g);
  if (!m.is_cr) { throw NotCR("congruence_key: orbit is not CR"); }
  const ClosedFormParameters p = closed_form_parameters(q.form, q.g);
  const SubalgebraSpec & s     = q.form.spec;
  CongruenceKey key{type_of(s.kind), s.dim_c, s.dim_r, s.model.n(), {}};
  switch (s.kind) {
    case Kind::R: key.scalars = {reduced_displacement(p.b, p.T.norm())}; break;
    case Kind::CRZ: break;
    case Kind::AR: key.scalars = {p.W.norm(), std::abs(p.y)}; break;
    case Kind::ACRZ: key.scalars = {p.T.norm()}; break;
  }
  return key;
}

/// Full report: the two-route CR verdict plus, for CR orbits, the congruence key.
inline OrbitReport analyze_orbit(const OrbitQuery & q)
{
  OrbitReport report = classify_orbit(q);
  if (report.is_cr) { report.congruence_key = congruence_key(q); }
  return report;
}

inline bool keys_equal(const CongruenceKey & k1, const CongruenceKey & k2)
{
  if (k1.kind != k2.kind || k1.dim_c != k2.dim_c || k1.dim_r != k2.dim_r || k1.n != k2.n) { return false; }
  if (k1.scalars.size() != k2.scalars.size()) { return false; }
  for (std::size_t i = 0; i < k1.scalars.size(); ++i) {
    if (std::abs(k1.scalars[i] - k2.scalars[i]) > kKeyTol) { return false; }
  }
  return true;
}

struct CongruenceDecision
{
  bool congruent;
  std::string reason;
  CongruenceKey key1;
  CongruenceKey key2;
};

namespace detail {

inline bool horosphere_type(TypeTag t) { return t == TypeTag::I || t == TypeTag::II; }

}  // namespace detail

/// Decides whether H1.g1(o) and H2.g2(o) are congruent.
inline CongruenceDecision are_congruent(const OrbitQuery & q1, const OrbitQuery & q2)
{
  require_same_dim(q1.form.model(), q2.form.model(), "are_congruent");
  CongruenceKey k1 = congruence_key(q1);
  CongruenceKey k2 = congruence_key(q2);
  std::string reason;
  bool congruent = false;

  if (k1.kind != k2.kind) {
    if (detail::horosphere_type(k1.kind) != detail::horosphere_type(k2.kind)) {
      reason = "types I/II lie in horospheres, types III/IV do not";
    } else if (!detail::horosphere_type(k1.kind)) {
      reason = "type III orbits are totally real, type IV orbits have a non-trivial complex part";
    } else {
      const CongruenceKey & ki = (k1.kind == TypeTag::I) ? k1 : k2;
      const CongruenceKey & kii = (k1.kind == TypeTag::I) ? k2 : k1;
      if (kii.dim_c != 0 || kii.dim_r + 1 != ki.dim_r) {
        reason = "type I and type II orbits differ in dimension or complex part";
      } else {
        const double t = ki.scalars.at(0) * ki.scalars.at(0);
        reason = "type I vs type II mean curvatures differ (gap 3 + 2(r-1)(1+t) = "
                 + std::to_string(type_i_ii_gap(ki.dim_r, t)) + " > 0)";
      }
    }
  } else if (k1.dim_c != k2.dim_c || k1.dim_r != k2.dim_r || k1.n != k2.n) {
    reason = "subalgebras of the same type but different dimensions are not conjugate";
  } else if (!keys_equal(k1, k2)) {
    reason = "scalar invariants differ";
  } else {
    congruent = true;
    reason    = "same type, dimensions and scalar invariants";
  }
  return {congruent, std::move(reason), std::move(k1), std::move(k2)};
}

// Kind-I reduced displacement oracle -----------------------------------------------

/// ||T'|| recovered from the numerically computed ||H||^2 of a kind-R orbit by inverting h.
inline double reduced_displacement_oracle(const OrbitQuery & q)
{
  if (q.form.spec.kind != Kind::R) { throw InvalidInput("reduced_displacement_oracle: kind R only"); }
  const ExtrinsicInvariants inv = orbit_invariants(pulled_back_tangent(q));
  return std::sqrt(h_profile_inverse(inv.mean_sq, q.form.spec.dim_r));
}

/// Closed-form candidates for the per-orbit kind-I invariant of Exp(bB + JT + W + yZ).
enum class DisplacementForm {
  CrossIndexed,  ///< ||T|| / rho(b/2), from rho(b2/2)||T1|| = rho(b1/2)||T2||
  RhoProduct,    ///< rho(b/2) ||T||
  RhoReflected,  ///< rho(-b/2) ||T||
};

inline constexpr std::array<DisplacementForm, 3> kDisplacementForms = {
  DisplacementForm::CrossIndexed, DisplacementForm::RhoProduct, DisplacementForm::RhoReflected};

inline const char * to_string(DisplacementForm f)
{
  switch (f) {
    case DisplacementForm::CrossIndexed: return "cross_indexed: ||T||/rho(b/2)";
    case DisplacementForm::RhoProduct: return "rho_product: rho(b/2)*||T||";
    case DisplacementForm::RhoReflected: return "rho_reflected: rho(-b/2)*||T||";
  }
  return "?";
}

inline double displacement_candidate(DisplacementForm f, double b, double t_norm)
{
  switch (f) {
    case DisplacementForm::CrossIndexed: return t_norm / rho(b / 2.0);
    case DisplacementForm::RhoProduct: return rho(b / 2.0) * t_norm;
    case DisplacementForm::RhoReflected: return rho(-b / 2.0) * t_norm;
  }
  return 0.0;
}

struct DisplacementSweep
{
  struct Entry
  {
    DisplacementForm form;
    double max_mean_sq_residual;  ///< max |h(candidate^2) - numeric ||H||^2|
    bool consistent;
  };
  std::vector<Entry> entries;
  int samples = 0;

  /// Candidates consistent with the oracle.
  std::vector<DisplacementForm> consistent_forms() const
  {
    std::vector<DisplacementForm> out;
    for (const auto & e : entries) {
      if (e.consistent) { out.push_back(e.form); }
    }
    return out;
  }
};

/// Compares every candidate against the mean-curvature oracle on a (b, ||T||) grid.
/// The grid covers b in [-2, 2] and ||T|| in [0, 2] for r in {1, 2, 3} with n = 4.
inline DisplacementSweep sweep_displacement_forms(double tol = kKeyTol)
{
  DisplacementSweep sweep;
  for (auto f : kDisplacementForms) { sweep.entries.push_back({f, 0.0, true}); }
  const ModelDim dim(4);
  for (int r = 1; r <= 3; ++r) {
    const SubalgebraSpec spec{Kind::R, 0, r, dim};
    for (int ib = 0; ib <= 8; ++ib) {
      const double b = -2.0 + 0.5 * ib;
      for (int it = 0; it <= 8; ++it) {
        const double tn = 0.25 * it;
        StructuredCoords s;
        s.b = b;
        s.y = 0.3;
        s.T = Eigen::VectorXd::Zero(r);
        s.T(0) = tn;
        s.W = Eigen::VectorXd::Zero(2 * (dim.alpha_dim() - r));
        if (s.W.size() > 0) { s.W(0) = 0.4; }
        const OrbitQuery q = make_query(spec, from_structured(spec, s));
        const double numeric = orbit_invariants(pulled_back_tangent(q)).mean_sq;
        for (auto & e : sweep.entries) {
          const double cand = displacement_candidate(e.form, b, tn);
          e.max_mean_sq_residual = std::max(e.max_mean_sq_residual, std::abs(h_profile(cand * cand, r) - numeric));
        }
        ++sweep.samples;
      }
    }
  }
  for (auto & e : sweep.entries) { e.consistent = e.max_mean_sq_residual <= tol; }
  return sweep;
}

// Moduli space -------------------------------------------------------------------

/// I_k = {1, ..., k} or I_{k,l} = {(i, j) : k <= i <= j <= l}.
struct IndexSet
{
  enum class Type { Ik, Ikl };
  Type type;
  int k;
  int l = 0;

  std::vector<std::vector<int>> elements() const
  {
    std::vector<std::vector<int>> out;
    if (type == Type::Ik) {
      for (int i = 1; i <= k; ++i) { out.push_back({i}); }
    } else {
      for (int i = k; i <= l; ++i) {
        for (int j = i; j <= l; ++j) { out.push_back({i, j}); }
      }
    }
    return out;
  }
};

/// One factor of a moduli component: an index set (absent for a bare product of half-lines)
/// times [0, inf)^half_lines.
struct ModuliPiece
{
  std::optional<IndexSet> index_set;
  int half_lines;
};

struct ModuliComponent
{
  TypeTag kind;
  std::vector<ModuliPiece> pieces;
};

inline std::vector<ModuliComponent> moduli_space(int n)
{
  if (n < 2) { throw InvalidInput("moduli_space: n must be >= 2"); }
  using T = IndexSet::Type;
  return {
    {TypeTag::I, {{IndexSet{T::Ik, n - 1}, 1}}},
    {TypeTag::II, {{IndexSet{T::Ikl, 0, n - 1}, 0}}},
    {TypeTag::III, {{std::nullopt, 1}, {IndexSet{T::Ik, n - 1}, 2}}},
    {TypeTag::IV, {{IndexSet{T::Ik, n - 1}, 0}, {IndexSet{T::Ikl, 1, n - 1}, 1}}},
  };
}

/// Position of a normal form inside the moduli description: (piece index, index-set element),
/// with i = dim_R r and j = dim_C(g_alpha minus c).
inline std::pair<std::size_t, std::vector<int>> moduli_label(const SubalgebraSpec & spec)
{
  spec.validate();
  const int r = spec.dim_r;
  const int j = spec.model.alpha_dim() - spec.dim_c;
  switch (spec.kind) {
    case Kind::R: return {0, {r}};
    case Kind::CRZ: return {0, {r, j}};
    case Kind::AR: return r == 0 ? std::pair<std::size_t, std::vector<int>>{0, {}} : std::pair<std::size_t, std::vector<int>>{1, {r}};
    case Kind::ACRZ: return r == 0 ? std::pair<std::size_t, std::vector<int>>{0, {j}} : std::pair<std::size_t, std::vector<int>>{1, {r, j}};
  }
  throw InvalidInput("moduli_label: unknown kind");
}

}  // namespace cr
