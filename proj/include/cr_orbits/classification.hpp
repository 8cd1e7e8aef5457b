#pragma once

// Normal forms b + c + r + z of subalgebras with a CR orbit through o, the slice
// through o meeting every orbit, and the two-route CR classifier for orbits
// H.g(o).

#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>
#include <Eigen/LU>

#include "cr_orbits/lie_model.hpp"
#include "cr_orbits/subspace.hpp"

namespace cr {

/// Subalgebra types, in the order of the classification:
/// R = r, CRZ = c + r + g_2alpha, AR = a + r, ACRZ = a + c + r + g_2alpha.
enum class Kind { R, CRZ, AR, ACRZ };

enum class TypeTag { I, II, III, IV, NotCR };

inline const char * to_string(Kind k)
{
  switch (k) {
    case Kind::R: return "R";
    case Kind::CRZ: return "CRZ";
    case Kind::AR: return "AR";
    case Kind::ACRZ: return "ACRZ";
  }
  return "?";
}

inline const char * to_string(TypeTag t)
{
  switch (t) {
    case TypeTag::I: return "I";
    case TypeTag::II: return "II";
    case TypeTag::III: return "III";
    case TypeTag::IV: return "IV";
    case TypeTag::NotCR: return "NotCR";
  }
  return "?";
}

inline TypeTag type_of(Kind k)
{
  switch (k) {
    case Kind::R: return TypeTag::I;
    case Kind::CRZ: return TypeTag::II;
    case Kind::AR: return TypeTag::III;
    case Kind::ACRZ: return TypeTag::IV;
  }
  return TypeTag::NotCR;
}

inline Kind parse_kind(const std::string & s)
{
  if (s == "R") { return Kind::R; }
  if (s == "CRZ") { return Kind::CRZ; }
  if (s == "AR") { return Kind::AR; }
  if (s == "ACRZ") { return Kind::ACRZ; }
  throw InvalidInput("unknown subalgebra kind '" + s + "' (expected R, CRZ, AR or ACRZ)");
}

/// Normal-form descriptor: dim_c is the complex dimension of c, dim_r the real dimension of r.
struct SubalgebraSpec
{
  Kind kind;
  int dim_c;
  int dim_r;
  ModelDim model;

  bool has_a() const { return kind == Kind::AR || kind == Kind::ACRZ; }
  bool has_z() const { return kind == Kind::CRZ || kind == Kind::ACRZ; }

  /// Real dimension of the subalgebra.
  int dim() const { return 2 * dim_c + dim_r + (has_a() ? 1 : 0) + (has_z() ? 1 : 0); }

  void validate() const
  {
    const int n = model.n();
    if (dim_c < 0 || dim_r < 0) { throw InvalidInput("spec: dim_c and dim_r must be non-negative"); }
    if (dim_c + dim_r > n - 1) {
      throw InvalidInput("spec: c + Cr does not fit in g_alpha (need dim_c + dim_r <= n - 1 = " + std::to_string(n - 1)
                         + ")");
    }
    switch (kind) {
      case Kind::R:
        if (dim_c != 0) { throw InvalidInput("spec: kind R requires dim_c = 0"); }
        if (dim_r < 1) { throw InvalidInput("spec: kind R requires dim_r >= 1"); }
        break;
      case Kind::AR:
        if (dim_c != 0) { throw InvalidInput("spec: kind AR requires dim_c = 0"); }
        break;
      case Kind::CRZ: break;
      case Kind::ACRZ:
        if (dim() == 2 * n) { throw InvalidInput("spec: a + g_alpha + g_2alpha is not a proper subalgebra"); }
        break;
    }
  }

  friend bool operator==(const SubalgebraSpec &, const SubalgebraSpec &) = default;
};

/// A normal form with explicit blocks: c complex and r totally real in g_alpha, r orthogonal to Jc.
/// The basis order of `r` fixes the meaning of structured T coordinates.
struct NormalForm
{
  SubalgebraSpec spec;
  Subspace c;
  Subspace r;

  ModelDim model() const { return spec.model; }

  /// J r, with basis J r_i.
  Subspace jr() const
  {
    Eigen::MatrixXd m(model().real_dim(), r.dim());
    for (Eigen::Index i = 0; i < r.dim(); ++i) { m.col(i) = J(r.vector(i)).coords(); }
    return Subspace(model(), std::move(m));
  }

  /// c' = g_alpha minus (c + Cr).
  Subspace cprime() const
  {
    return relative_complement(g_alpha(model()), direct_sum(direct_sum(c, r), jr()));
  }

  Subspace algebra() const
  {
    Subspace h = direct_sum(c, r);
    if (spec.has_a()) { h = direct_sum(a_line(model()), h); }
    if (spec.has_z()) { h = direct_sum(h, center(model())); }
    return h;
  }
};

/// Canonical embedding: c on the first dim_c complex coordinates of g_alpha, r on the real axes of
/// the next dim_r coordinates. c' takes the remaining coordinates.
inline NormalForm canonical_form(const SubalgebraSpec & spec)
{
  spec.validate();
  const ModelDim dim = spec.model;
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(dim.real_dim(), 2 * spec.dim_c);
  for (int k = 0; k < spec.dim_c; ++k) {
    c(dim.alpha_index(k, false), 2 * k)     = 1.0;
    c(dim.alpha_index(k, true), 2 * k + 1)  = 1.0;
  }
  Eigen::MatrixXd r = Eigen::MatrixXd::Zero(dim.real_dim(), spec.dim_r);
  for (int k = 0; k < spec.dim_r; ++k) { r(dim.alpha_index(spec.dim_c + k, false), k) = 1.0; }
  return {spec, Subspace(dim, std::move(c)), Subspace(dim, std::move(r))};
}

/// Canonical basis of c' (interleaved real/imaginary axes), matching structured W coordinates.
inline Subspace canonical_cprime(const SubalgebraSpec & spec)
{
  const ModelDim dim = spec.model;
  const int first    = spec.dim_c + spec.dim_r;
  const int count    = dim.alpha_dim() - first;
  Eigen::MatrixXd m  = Eigen::MatrixXd::Zero(dim.real_dim(), 2 * count);
  for (int k = 0; k < count; ++k) {
    m(dim.alpha_index(first + k, false), 2 * k)    = 1.0;
    m(dim.alpha_index(first + k, true), 2 * k + 1) = 1.0;
  }
  return Subspace(dim, std::move(m));
}

inline Subspace build_subalgebra(const SubalgebraSpec & spec) { return canonical_form(spec).algebra(); }

/// Structured coordinates of g = Exp(bB + JT + W + yZ): T in the basis of r, W in the basis of c'.
struct StructuredCoords
{
  double b = 0.0;
  Eigen::VectorXd T;
  Eigen::VectorXd W;
  double y = 0.0;
};

inline AlgVec structured_vector(const NormalForm & form, const Subspace & cprime_basis, const StructuredCoords & s)
{
  const ModelDim dim = form.model();
  if (s.T.size() != form.r.dim()) {
    throw InvalidInput("structured coordinates: T must have dim_r = " + std::to_string(form.r.dim()) + " entries");
  }
  if (s.W.size() != cprime_basis.dim()) {
    throw InvalidInput("structured coordinates: W must have " + std::to_string(cprime_basis.dim())
                       + " entries (interleaved re/im over c')");
  }
  Eigen::VectorXd v = form.jr().basis() * s.T + cprime_basis.basis() * s.W;
  v(0)              += s.b;
  v(dim.z_index())  += s.y;
  return AlgVec(dim, std::move(v));
}

/// g = Exp(bB + JT + W + yZ) on the canonical embedding of `spec`.
inline GroupElement from_structured(const SubalgebraSpec & spec, const StructuredCoords & s)
{
  return GroupElement::exp(structured_vector(canonical_form(spec), canonical_cprime(spec), s));
}

/// Coordinates of a slice vector Y = bB + JT + W + yZ relative to the blocks of `form`.
inline StructuredCoords structured_coords(const NormalForm & form, const Subspace & cprime_basis, const AlgVec & Y)
{
  StructuredCoords s;
  s.b = Y.a();
  s.y = Y.z();
  s.T = form.jr().basis().transpose() * Y.coords();
  s.W = cprime_basis.basis().transpose() * Y.coords();
  return s;
}

/// g = Exp(x_h) Exp(y) with x_h in h and y in (a + n) minus h.
struct SliceDecomposition
{
  AlgVec x_h;
  AlgVec y;

  GroupElement slice_point() const { return GroupElement::exp(y); }
};

/// Splits g = Exp(cB + U + V + S + JT + zZ) (U in c, V in c', S,T in r) into a factor of H and a
/// point of the normal slice through o, using the explicit rho-weighted coordinates.
inline SliceDecomposition slice_reduce(const NormalForm & form, const GroupElement & g)
{
  require_same_dim(form.model(), g.dim(), "slice_reduce");
  const ModelDim dim = form.model();
  const AlgVec & xi  = g.xi();
  const double c = xi.a(), z = xi.z();
  const AlgVec W = xi.alpha_part();

  const Subspace jr = form.jr();
  const AlgVec U  = form.c.project(W);
  const AlgVec S  = form.r.project(W);
  const AlgVec JT = jr.project(W);
  const AlgVec V  = W - U - S - JT;
  const AlgVec T  = -J(JT);

  const double a = form.spec.has_a() ? c : 0.0;
  const double b = form.spec.has_a() ? 0.0 : c;

  const double rc2    = rho(c / 2.0);
  const double common = rho(c) * z - 0.5 * rc2 * rc2 * inner(S, T);
  double x = 0.0, y = 0.0;
  if (form.spec.has_z()) {
    x = common / rho(a);
  } else {
    y = std::exp(-a) / rho(b) * common;
  }

  AlgVec x_h = (rc2 / rho(a / 2.0)) * (U + S) + a * AlgVec::B(dim) + x * AlgVec::Z(dim);
  AlgVec y_n = (std::exp(-a / 2.0) * rc2 / rho(b / 2.0)) * (V + JT) + b * AlgVec::B(dim) + y * AlgVec::Z(dim);
  return {std::move(x_h), std::move(y_n)};
}

inline SliceDecomposition slice_reduce(const SubalgebraSpec & spec, const GroupElement & g)
{
  return slice_reduce(canonical_form(spec), g);
}

/// Image Ad(g) V.
inline Subspace adjoint_image(const GroupElement & g, const Subspace & V)
{
  return transform(V, [&g](const AlgVec & x) { return adjoint(g, x); });
}

struct Normalization
{
  GroupElement g;  ///< Ad(g) h equals form.algebra()
  NormalForm form;
};

namespace detail {

inline constexpr double kCaseTol = 1e-10;

inline NormalForm make_form(Kind kind, const Subspace & c, const Subspace & r, ModelDim dim)
{
  SubalgebraSpec spec{kind, static_cast<int>(c.dim() / 2), static_cast<int>(r.dim()), dim};
  spec.validate();
  return {spec, c, r};
}

// Rank of the orthogonal projection of V onto a + g_2alpha.
inline int projection_rank(const Subspace & V)
{
  const ModelDim dim = V.model();
  Eigen::MatrixXd m(2, V.dim());
  m.row(0) = V.basis().row(0);
  m.row(1) = V.basis().row(dim.z_index());
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  int rank = 0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) {
    if (svd.singularValues()(i) > kRankTol) { ++rank; }
  }
  return rank;
}

}  // namespace detail

/// Conjugates a subalgebra whose orbit through o is CR into a normal form b + c + r + z,
/// following the case analysis on the projection onto a + g_2alpha.
inline Normalization normalize_subalgebra(const Subspace & h)
{
  const ModelDim dim = h.model();
  if (h.empty()) { throw InvalidInput("normalize_subalgebra: the zero subalgebra has no proper orbit"); }
  if (!is_subalgebra(h)) {
    throw NotSubalgebra("normalize_subalgebra: input is not a subalgebra (closure defect "
                        + std::to_string(closure_defect(h)) + ")");
  }
  if (!cr_decompose(h).is_cr) {
    throw NotCR("normalize_subalgebra: the orbit through o is not CR (h is not a CR subspace)");
  }

  const Subspace w    = intersect(h, g_alpha(dim));
  const Subspace rest = relative_complement(h, w);
  GroupElement g = GroupElement::identity(dim);
  std::optional<NormalForm> form;

  if (detail::projection_rank(h) == 2) {
    // h = R(B + X) + w + R(Y + Z); Y = 0 for CR subalgebras.
    Eigen::Matrix2d A;
    A << rest.basis().row(0), rest.basis().row(dim.z_index());
    const Eigen::Matrix2d coef = A.inverse();
    const AlgVec bx(dim, rest.basis() * coef.col(0));
    const AlgVec yz(dim, rest.basis() * coef.col(1));
    if (yz.alpha_part().norm() > kRankTol) {
      throw InternalInconsistency("normalize_subalgebra: surjective case with Y != 0 cannot be a CR subalgebra");
    }
    const Subspace c = maximal_complex_subspace(w);
    const Subspace r = relative_complement(w, c);
    g                = GroupElement::exp(2.0 * bx.alpha_part());
    form             = detail::make_form(Kind::ACRZ, c, r, dim);
  } else if (rest.empty()) {
    // h = w inside g_alpha; closure forces w totally real.
    if (!maximal_complex_subspace(w).empty()) {
      throw InternalInconsistency("normalize_subalgebra: complex part inside g_alpha without Z");
    }
    form = detail::make_form(Kind::R, Subspace(dim), w, dim);
  } else {
    // h = R(aB + X + xZ) + w.
    const AlgVec v = rest.vector(0);
    const double a = v.a(), x = v.z();
    const AlgVec X = v.alpha_part();
    if (std::abs(a) <= detail::kCaseTol && X.norm() <= detail::kCaseTol) {
      const Subspace c = maximal_complex_subspace(w);
      form             = detail::make_form(Kind::CRZ, c, relative_complement(w, c), dim);
    } else if (std::abs(a) > detail::kCaseTol) {
      g    = GroupElement::exp((2.0 / a) * X + (x / a) * AlgVec::Z(dim));
      form = detail::make_form(Kind::AR, Subspace(dim), w, dim);
    } else {
      g    = GroupElement::exp((x / X.squared_norm()) * J(X));
      form = detail::make_form(Kind::R, Subspace(dim), direct_sum(w, orthonormalize(dim, {X})), dim);
    }
  }

  if (!same_subspace(adjoint_image(g, h), form->algebra(), 1e-9)) {
    throw InternalInconsistency("normalize_subalgebra: conjugated subalgebra does not match its normal form");
  }
  return {std::move(g), std::move(*form)};
}

/// Congruence invariants of a CR orbit (filled in by the congruence module).
struct CongruenceKey
{
  TypeTag kind;
  int dim_c;
  int dim_r;
  int n;
  std::vector<double> scalars;
};

struct RawOrbit
{
  Subspace h;
  GroupElement g;
};

/// An orbit H.g(o), expressed on a normal form. When the orbit came from an explicit subalgebra,
/// `raw` keeps the original (h, g); then H_raw.g_raw(o) is congruent to H_form.g(o).
struct OrbitQuery
{
  NormalForm form;
  GroupElement g;
  std::optional<RawOrbit> raw;
};

inline OrbitQuery make_query(const SubalgebraSpec & spec, const GroupElement & g)
{
  return {canonical_form(spec), g, std::nullopt};
}

inline OrbitQuery make_query(const Subspace & h, const GroupElement & g)
{
  Normalization norm = normalize_subalgebra(h);
  GroupElement g_eff = norm.g * g;
  return {std::move(norm.form), std::move(g_eff), RawOrbit{h, g}};
}

/// Tangent space of H.g(o) pulled back to o: Ad(g^{-1}) h.
inline Subspace pulled_back_tangent(const OrbitQuery & q)
{
  if (q.raw) { return adjoint_image(group_inverse(q.raw->g), q.raw->h); }
  return adjoint_image(group_inverse(q.g), q.form.algebra());
}

/// Threshold on slice components when evaluating the membership predicates.
inline constexpr double kComponentTol = 1e-6;

struct MembershipVerdict
{
  bool is_cr;
  AlgVec slice;           ///< slice point y with H.g(o) = H.Exp(y)(o)
  double jr_component;    ///< norm of the J r component of y
  double cprime_component;  ///< norm of the c' component of y
};

/// Closed-form membership: R and CRZ orbits are always CR; AR orbits iff the slice point has no
/// J r component; ACRZ orbits iff it has no c' component.
inline MembershipVerdict membership_predicate(const NormalForm & form, const GroupElement & g)
{
  SliceDecomposition sd = slice_reduce(form, g);
  const double jr_norm  = form.jr().project(sd.y).norm();
  const AlgVec alpha    = sd.y.alpha_part();
  const double cp_norm  = (alpha - form.jr().project(alpha)).norm();
  bool cr               = true;
  if (form.spec.kind == Kind::AR) { cr = jr_norm <= kComponentTol; }
  if (form.spec.kind == Kind::ACRZ) { cr = cp_norm <= kComponentTol; }
  return {cr, std::move(sd.y), jr_norm, cp_norm};
}

struct OrbitReport
{
  bool is_cr;
  TypeTag type_tag;
  SubalgebraSpec spec;
  Subspace tangent_at_o;
  CrDecomposition decomposition;
  MembershipVerdict membership;
  std::optional<CongruenceKey> congruence_key;
};

/// Decides whether H.g(o) is CR twice: directly on Ad(g^{-1}) h, and through the membership
/// predicate on the slice point. Throws InternalInconsistency if the routes disagree.
inline OrbitReport classify_orbit(const OrbitQuery & q)
{
  require_same_dim(q.form.model(), q.g.dim(), "classify_orbit");
  Subspace tangent          = pulled_back_tangent(q);
  CrDecomposition decomp    = cr_decompose(tangent);
  MembershipVerdict verdict = membership_predicate(q.form, q.g);
  if (decomp.is_cr != verdict.is_cr) {
    throw InternalInconsistency(std::string("classify_orbit: direct CR test says ")
                                + (decomp.is_cr ? "CR" : "not CR") + " but the membership predicate for kind "
                                + to_string(q.form.spec.kind) + " says " + (verdict.is_cr ? "CR" : "not CR"));
  }
  const bool cr = decomp.is_cr;
  return {cr,
          cr ? type_of(q.form.spec.kind) : TypeTag::NotCR,
          q.form.spec,
          std::move(tangent),
          std::move(decomp),
          std::move(verdict),
          std::nullopt};
}

}  // namespace cr
