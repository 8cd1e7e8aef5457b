#pragma once

// Levi-Civita connection of the left-invariant Kahler metric on AN, its
// curvature, and extrinsic invariants of subgroup orbits computed at o on the
// pulled-back tangent space Ad(g^{-1}) h.

#include <cmath>
#include <optional>
#include <string>
#include <tuple>

#include "cr_orbits/classification.hpp"
#include "cr_orbits/lie_model.hpp"
#include "cr_orbits/subspace.hpp"

namespace cr {

/// nabla_{aB+U+xZ}(bB+V+yZ) = (<U,V>/2 + xy) B - (bU + yJU + xJV)/2 + (<JU,V>/2 - bx) Z.
inline AlgVec levi_civita(const AlgVec & X, const AlgVec & Y)
{
  require_same_dim(X.dim(), Y.dim(), "levi_civita");
  const ModelDim dim = X.dim();
  const double x = X.z();
  const double b = Y.a(), y = Y.z();
  const AlgVec U = X.alpha_part(), V = Y.alpha_part();

  AlgVec out = -0.5 * (b * U + y * J(U) + x * J(V));
  Eigen::VectorXd c = out.coords();
  c(0) += 0.5 * inner(U, V) + x * y;
  c(dim.z_index()) += 0.5 * inner(J(U), V) - b * x;
  return AlgVec(dim, std::move(c));
}

/// Connection of left-invariant fields recovered from the Koszul formula
/// 2<nabla_X Y, E> = <[X,Y],E> - <[Y,E],X> + <[E,X],Y>, using only bracket and metric.
inline AlgVec koszul_oracle(const AlgVec & X, const AlgVec & Y)
{
  require_same_dim(X.dim(), Y.dim(), "koszul_oracle");
  const ModelDim dim = X.dim();
  const AlgVec xy    = bracket(X, Y);
  Eigen::VectorXd out(dim.real_dim());
  for (Eigen::Index k = 0; k < dim.real_dim(); ++k) {
    const AlgVec e(dim, Eigen::VectorXd::Unit(dim.real_dim(), k));
    out(k) = 0.5 * (inner(xy, e) - inner(bracket(Y, e), X) + inner(bracket(e, X), Y));
  }
  return AlgVec(dim, std::move(out));
}

/// R(X,Y)W = nabla_X nabla_Y W - nabla_Y nabla_X W - nabla_{[X,Y]} W on left-invariant fields.
inline AlgVec curvature(const AlgVec & X, const AlgVec & Y, const AlgVec & W)
{
  return levi_civita(X, levi_civita(Y, W)) - levi_civita(Y, levi_civita(X, W)) - levi_civita(bracket(X, Y), W);
}

struct ExtrinsicInvariants
{
  AlgVec mean_curvature_vector;
  double mean_sq;
  /// Absent only for closed forms where no formula is available.
  std::optional<double> second_fundamental_sq;
};

/// Second fundamental form of the orbit of the subgroup with Lie algebra `tangent` through o:
/// II(E_i, E_j) = normal part of nabla_{E_i} E_j over an orthonormal basis.
inline ExtrinsicInvariants orbit_invariants(const Subspace & tangent)
{
  if (!is_subalgebra(tangent)) {
    throw NotSubalgebra("orbit_invariants: tangent space is not a subalgebra (closure defect "
                        + std::to_string(closure_defect(tangent)) + ")");
  }
  const ModelDim dim = tangent.model();
  AlgVec mean(dim);
  double ii_sq = 0.0;
  for (Eigen::Index i = 0; i < tangent.dim(); ++i) {
    const AlgVec ei = tangent.vector(i);
    for (Eigen::Index j = 0; j < tangent.dim(); ++j) {
      const AlgVec ii = tangent.reject(levi_civita(ei, tangent.vector(j)));
      ii_sq += ii.squared_norm();
      if (i == j) { mean += ii; }
    }
  }
  const double msq = mean.squared_norm();
  return {std::move(mean), msq, ii_sq};
}

// Closed forms --------------------------------------------------------------

/// Kind R at Exp(JT): ||H||^2 = (4t + (r + (r+1)t)^2) / (4(1+t)^2) with t = ||T||^2.
inline double mean_sq_kind_r(double t, int r)
{
  const double s = r + (r + 1) * t;
  return (4.0 * t + s * s) / (4.0 * (1.0 + t) * (1.0 + t));
}

/// Kind CRZ, any orbit: ||H||^2 = (2 + dim(c + r))^2 / 4, dim real.
inline double mean_sq_kind_crz(int real_dim_cr)
{
  const double k = 2.0 + real_dim_cr;
  return k * k / 4.0;
}

/// Kind AR at Exp(2W + yZ): (||H||^2, ||II||^2).
inline std::pair<double, double> invariants_kind_ar(double w_norm, double y, int r)
{
  const double w = w_norm * w_norm, y2 = y * y;
  const double den = 4.0 * (1.0 + y2 + w) * (1.0 + y2 + w);
  const double mean = ((1.0 + r) * (1.0 + r) * w * w + (2.0 + r) * (2.0 + r) * y2 * (1.0 + y2)
                       + w * (1.0 + 8.0 * y2 + r * r * (1.0 + 2.0 * y2) + 2.0 * r * (1.0 + 3.0 * y2)))
                      / den;
  const double ii = ((1.0 + r) * w * w + (4.0 + 3.0 * r) * y2 * (1.0 + y2) + w * (1.0 + r + 4.0 * y2 * (2.0 + r)))
                    / den;
  return {mean, ii};
}

/// Kind ACRZ at Exp(JT): ||H||^2 = t (3 + dim(c + r))^2 / (4(4 + t)), t = ||T||^2, dim real.
inline double mean_sq_kind_acrz(double t, int real_dim_cr)
{
  const double k = 3.0 + real_dim_cr;
  return t * k * k / (4.0 * (4.0 + t));
}

/// Orthonormal frame X (tangent) and xi_1, xi_2 (normal) along the kind-AR orbit through
/// Exp(2W + yZ); xi_2 requires W != 0.
struct KindArFrame
{
  AlgVec X;
  AlgVec xi1;
  std::optional<AlgVec> xi2;
};

inline KindArFrame kind_ar_frame(const AlgVec & W, double y)
{
  const ModelDim dim = W.dim();
  const AlgVec B = AlgVec::B(dim), Z = AlgVec::Z(dim);
  const double w2 = W.squared_norm();
  const double y2 = y * y;
  KindArFrame f{(B + W + y * Z) / std::sqrt(1.0 + y2 + w2), (-y * B + Z) / std::sqrt(1.0 + y2), std::nullopt};
  if (w2 > 0.0) {
    f.xi2 = (w2 * B - (1.0 + y2) * W + y * w2 * Z) / (std::sqrt(w2) * std::sqrt((1.0 + y2) * (1.0 + y2 + w2)));
  }
  return f;
}

/// Parameters of the closed form matching a CR orbit, read off its slice point.
struct ClosedFormParameters
{
  Kind kind;
  int dim_r;
  int real_dim_cr;
  double b = 0.0;       ///< kind R: B-coordinate of the slice point
  AlgVec T;             ///< kinds R, ACRZ: r-vector with slice J r component JT
  AlgVec W;             ///< kind AR: c' component of the slice point, g = Exp(W + yZ)
  double y = 0.0;       ///< kind AR: Z-coordinate of the slice point
};

inline ClosedFormParameters closed_form_parameters(const NormalForm & form, const GroupElement & g)
{
  const MembershipVerdict m = membership_predicate(form, g);
  if (!m.is_cr) { throw NotCR("closed-form invariants need a CR orbit"); }
  const AlgVec JT = form.jr().project(m.slice);
  return {form.spec.kind,
          form.spec.dim_r,
          2 * form.spec.dim_c + form.spec.dim_r,
          m.slice.a(),
          -J(JT),
          m.slice.alpha_part() - JT,
          m.slice.z()};
}

/// Reduced displacement of a kind-R orbit through Exp(bB + JT + W + yZ): the orbit is congruent
/// to the one through Exp(J T') with ||T'|| = rho(-b/2) ||T||, because its pulled-back tangent
/// Ad(g^{-1}) r coincides with that of Exp(rho(-b/2) JT).
inline double reduced_displacement(double b, double t_norm) { return rho(-b / 2.0) * t_norm; }

/// Closed-form invariants for the kind of the orbit, evaluated at its slice point.
/// ||II||^2 is provided for kind AR only.
inline ExtrinsicInvariants closed_form_invariants(const NormalForm & form, const GroupElement & g)
{
  const ClosedFormParameters p = closed_form_parameters(form, g);
  const ModelDim dim      = form.model();
  const AlgVec B = AlgVec::B(dim), Z = AlgVec::Z(dim);

  switch (p.kind) {
    case Kind::R: {
      // Exp(J T) formula on the reduced displacement rho(-b/2) T.
      const AlgVec Tr = rho(-p.b / 2.0) * p.T;
      const double t  = Tr.squared_norm();
      const int r     = p.dim_r;
      AlgVec mean     = ((r - 1) / 2.0 + (1.0 + 2.0 * t) / (2.0 * (1.0 + t))) * B - J(Tr) / (1.0 + t);
      return {std::move(mean), mean_sq_kind_r(t, r), std::nullopt};
    }
    case Kind::CRZ: {
      return {((2.0 + p.real_dim_cr) / 2.0) * B, mean_sq_kind_crz(p.real_dim_cr), std::nullopt};
    }
    case Kind::AR: {
      // The kind-AR formulas are written for Exp(2W + yZ); halve the slice component.
      const AlgVec Wl   = 0.5 * p.W;
      const double w    = Wl.norm();
      const double y    = p.y;
      const int r       = p.dim_r;
      const double den  = 1.0 + y * y + w * w;
      const AlgVec iixx = ((y * y + 0.5 * w * w) * B - 0.5 * Wl - y * Z - y * J(Wl)) / den;
      const AlgVec iiss = ((y * y + w * w) * B - Wl - y * Z) / (2.0 * den);
      auto [msq, iisq]  = invariants_kind_ar(w, y, r);
      return {iixx + static_cast<double>(r) * iiss, msq, iisq};
    }
    case Kind::ACRZ: {
      const double t = p.T.squared_norm();
      const double k = 3.0 + p.real_dim_cr;
      AlgVec mean    = (k / (2.0 * (4.0 + t))) * (t * B - 2.0 * J(p.T));
      return {std::move(mean), mean_sq_kind_acrz(t, p.real_dim_cr), std::nullopt};
    }
  }
  throw InvalidInput("closed_form_invariants: unsupported kind");
}

inline ExtrinsicInvariants closed_form_invariants(const SubalgebraSpec & spec, const GroupElement & g)
{
  return closed_form_invariants(canonical_form(spec), g);
}

/// (||H||^2 - ||II||^2, (r+1)||II||^2 - ||H||^2) for kind AR at Exp(2W + yZ).
inline std::pair<double, double> kind_ar_invariant_pair(const SubalgebraSpec & spec, double w_norm, double y)
{
  if (spec.kind != Kind::AR) { throw InvalidInput("kind_ar_invariant_pair: requires kind AR"); }
  const double r = spec.dim_r;
  const double w = w_norm * w_norm, y2 = y * y;
  const double s = 1.0 + y2 + w;
  return {r * (1.0 + r) * (y2 + w) / (4.0 * s),
          r * y2 * ((3.0 + 2.0 * r) * (1.0 + y2) + 2.0 * (3.0 + r) * w) / (4.0 * s * s)};
}

}  // namespace cr
