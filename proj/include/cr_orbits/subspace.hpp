#pragma once

// Linear subspaces of a + n with orthonormal bases, and the complex / totally
// real / CR / subalgebra predicates on them.

#include <algorithm>
#include <cmath>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "cr_orbits/lie_model.hpp"

namespace cr {

/// Relative singular-value threshold for rank decisions.
inline constexpr double kRankTol = 1e-8;
/// Absolute threshold for the J-pairing, J-invariance and bracket-closure predicates.
inline constexpr double kPredicateTol = 1e-10;

class Subspace
{
public:
  /// Zero subspace.
  explicit Subspace(ModelDim dim) : dim_(dim), basis_(dim.real_dim(), 0) {}

  /// Columns of `orthonormal_basis` must already be orthonormal; use orthonormalize() otherwise.
  Subspace(ModelDim dim, Eigen::MatrixXd orthonormal_basis) : dim_(dim), basis_(std::move(orthonormal_basis))
  {
    if (basis_.rows() != dim_.real_dim()) { throw DimensionMismatch("Subspace: basis rows must equal 2n"); }
  }

  static Subspace full(ModelDim dim)
  {
    return Subspace(dim, Eigen::MatrixXd::Identity(dim.real_dim(), dim.real_dim()));
  }

  ModelDim model() const { return dim_; }
  Eigen::Index dim() const { return basis_.cols(); }
  bool empty() const { return basis_.cols() == 0; }

  const Eigen::MatrixXd & basis() const { return basis_; }
  AlgVec vector(Eigen::Index i) const { return AlgVec(dim_, basis_.col(i)); }

  std::vector<AlgVec> vectors() const
  {
    std::vector<AlgVec> out;
    out.reserve(static_cast<std::size_t>(dim()));
    for (Eigen::Index i = 0; i < dim(); ++i) { out.push_back(vector(i)); }
    return out;
  }

  Eigen::MatrixXd projector() const { return basis_ * basis_.transpose(); }

  AlgVec project(const AlgVec & x) const
  {
    require_same_dim(dim_, x.dim(), "Subspace::project");
    return AlgVec(dim_, basis_ * (basis_.transpose() * x.coords()));
  }

  /// Component of x orthogonal to this subspace.
  AlgVec reject(const AlgVec & x) const { return x - project(x); }

private:
  ModelDim dim_;
  Eigen::MatrixXd basis_;
};

/// Orthonormal basis of the column span of `columns` (2n x m).
inline Subspace orthonormalize_columns(ModelDim dim, const Eigen::MatrixXd & columns)
{
  if (columns.rows() != dim.real_dim()) { throw DimensionMismatch("orthonormalize: vectors must have length 2n"); }
  if (columns.cols() == 0) { return Subspace(dim); }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(columns, Eigen::ComputeThinU);
  const auto & sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) { return Subspace(dim); }
  Eigen::Index rank = 0;
  while (rank < sv.size() && sv(rank) > kRankTol * sv(0)) { ++rank; }
  return Subspace(dim, svd.matrixU().leftCols(rank));
}

inline Subspace orthonormalize(ModelDim dim, std::span<const AlgVec> vectors)
{
  Eigen::MatrixXd m(dim.real_dim(), static_cast<Eigen::Index>(vectors.size()));
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    require_same_dim(dim, vectors[i].dim(), "orthonormalize");
    m.col(static_cast<Eigen::Index>(i)) = vectors[i].coords();
  }
  return orthonormalize_columns(dim, m);
}

inline Subspace orthonormalize(ModelDim dim, std::initializer_list<AlgVec> vectors)
{
  return orthonormalize(dim, std::span<const AlgVec>(vectors.begin(), vectors.size()));
}

inline Subspace span_of(ModelDim dim, const std::vector<AlgVec> & vectors)
{
  return orthonormalize(dim, std::span<const AlgVec>(vectors));
}

namespace detail {

// Eigenvectors of a symmetric matrix whose eigenvalue exceeds `threshold`.
inline Subspace eigen_select(ModelDim dim, const Eigen::MatrixXd & sym, double threshold)
{
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (sym + sym.transpose()));
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    if (es.eigenvalues()(i) > threshold) { keep.push_back(i); }
  }
  Eigen::MatrixXd cols(dim.real_dim(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t k = 0; k < keep.size(); ++k) {
    cols.col(static_cast<Eigen::Index>(k)) = es.eigenvectors().col(keep[k]);
  }
  // Eigenvectors of distinct eigenvalues are orthogonal; re-orthonormalize to absorb clustering.
  return orthonormalize_columns(dim, cols);
}

}  // namespace detail

inline Subspace orth_complement(const Subspace & V)
{
  const ModelDim dim   = V.model();
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(dim.real_dim(), dim.real_dim());
  return detail::eigen_select(dim, I - V.projector(), 0.5);
}

/// V intersect W from the eigenvalues of P_V P_W P_V close to 1.
inline Subspace intersect(const Subspace & V, const Subspace & W)
{
  require_same_dim(V.model(), W.model(), "intersect");
  if (V.empty() || W.empty()) { return Subspace(V.model()); }
  const Eigen::MatrixXd Pv = V.projector();
  return detail::eigen_select(V.model(), Pv * W.projector() * Pv, 1.0 - kRankTol);
}

/// V minus W, i.e. the orthogonal complement of W inside V.
inline Subspace relative_complement(const Subspace & V, const Subspace & W)
{
  require_same_dim(V.model(), W.model(), "relative_complement");
  if (W.empty() || V.empty()) { return V; }
  // Eigen-selection keeps an absolute scale: when V lies in W the residual V - P_W V is pure
  // round-off and must not be renormalized into a spurious direction.
  const Eigen::MatrixXd Pv = V.projector();
  const Eigen::MatrixXd I  = Eigen::MatrixXd::Identity(Pv.rows(), Pv.cols());
  return detail::eigen_select(V.model(), Pv * (I - W.projector()) * Pv, 0.5);
}

/// Span of V and W.
inline Subspace direct_sum(const Subspace & V, const Subspace & W)
{
  require_same_dim(V.model(), W.model(), "direct_sum");
  Eigen::MatrixXd m(V.model().real_dim(), V.dim() + W.dim());
  m << V.basis(), W.basis();
  return orthonormalize_columns(V.model(), m);
}

/// Image of V under a linear map given pointwise.
inline Subspace transform(const Subspace & V, const std::function<AlgVec(const AlgVec &)> & map)
{
  std::vector<AlgVec> images;
  images.reserve(static_cast<std::size_t>(V.dim()));
  for (Eigen::Index i = 0; i < V.dim(); ++i) { images.push_back(map(V.vector(i))); }
  return span_of(V.model(), images);
}

inline Subspace J_image(const Subspace & V)
{
  return transform(V, [](const AlgVec & x) { return J(x); });
}

/// Largest entry of |P_V - P_W|; zero iff V == W.
inline double projector_distance(const Subspace & V, const Subspace & W)
{
  require_same_dim(V.model(), W.model(), "projector_distance");
  return (V.projector() - W.projector()).cwiseAbs().maxCoeff();
}

inline bool same_subspace(const Subspace & V, const Subspace & W, double tol)
{
  return V.dim() == W.dim() && projector_distance(V, W) <= tol;
}

inline bool contains(const Subspace & V, const AlgVec & x, double tol)
{
  return V.reject(x).norm() <= tol * std::max(1.0, x.norm());
}

/// V intersect JV.
inline Subspace maximal_complex_subspace(const Subspace & V) { return intersect(V, J_image(V)); }

/// Largest |<J b_i, b_j>| over the basis.
inline double j_pairing(const Subspace & V)
{
  double worst = 0.0;
  for (Eigen::Index i = 0; i < V.dim(); ++i) {
    const AlgVec jb = J(V.vector(i));
    worst = std::max(worst, (V.basis().transpose() * jb.coords()).cwiseAbs().maxCoeff());
  }
  return worst;
}

inline bool is_totally_real(const Subspace & V) { return j_pairing(V) <= kPredicateTol; }

inline bool is_complex(const Subspace & V)
{
  if (V.empty()) { return true; }
  return projector_distance(V, J_image(V)) <= kPredicateTol;
}

struct CrDecomposition
{
  Subspace complex_part;
  Subspace real_part;
  bool is_cr;
};

inline CrDecomposition cr_decompose(const Subspace & V)
{
  Subspace m    = maximal_complex_subspace(V);
  Subspace rest = relative_complement(V, m);
  const bool cr = is_totally_real(rest);
  return {std::move(m), std::move(rest), cr};
}

/// Largest norm of the component of [b_i, b_j] normal to V.
inline double closure_defect(const Subspace & V)
{
  double worst = 0.0;
  for (Eigen::Index i = 0; i < V.dim(); ++i) {
    for (Eigen::Index j = i + 1; j < V.dim(); ++j) {
      worst = std::max(worst, V.reject(bracket(V.vector(i), V.vector(j))).norm());
    }
  }
  return worst;
}

inline bool is_subalgebra(const Subspace & V) { return closure_defect(V) <= kPredicateTol; }

/// Named subspaces of the root decomposition.
inline Subspace a_line(ModelDim dim) { return orthonormalize(dim, {AlgVec::B(dim)}); }
inline Subspace center(ModelDim dim) { return orthonormalize(dim, {AlgVec::Z(dim)}); }
inline Subspace g_alpha(ModelDim dim)
{
  std::vector<AlgVec> v;
  for (int k = 0; k < dim.alpha_dim(); ++k) {
    v.push_back(AlgVec::alpha_axis(dim, k, false));
    v.push_back(AlgVec::alpha_axis(dim, k, true));
  }
  return span_of(dim, v);
}

}  // namespace cr
