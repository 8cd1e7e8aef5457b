#pragma once

// The solvable Lie algebra a + g_alpha + g_2alpha of the complex hyperbolic
// space CH^n and the group AN acting simply transitively on it.
//
// Vectors are stored in a flat real encoding of length 2n:
//
//   [a, Re v_1, Im v_1, ..., Re v_{n-1}, Im v_{n-1}, z]
//
// for the element aB + v + zZ, with B a unit vector of a, Z = JB spanning the
// centre g_2alpha, and v in g_alpha = C^{n-1}. The metric is the Euclidean
// one in this encoding.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

#include <Eigen/Core>

#include "cr_orbits/errors.hpp"

namespace cr {

inline constexpr int kMinModelDim = 2;
inline constexpr int kMaxModelDim = 32;

/// Complex dimension n of the ambient CH^n.
class ModelDim
{
public:
  explicit ModelDim(int n) : n_(n)
  {
    if (n < kMinModelDim || n > kMaxModelDim) {
      throw InvalidInput("model dimension n must lie in [" + std::to_string(kMinModelDim) + ", "
                         + std::to_string(kMaxModelDim) + "], got " + std::to_string(n));
    }
  }

  int n() const { return n_; }
  /// Real dimension 2n of a + n.
  Eigen::Index real_dim() const { return 2 * n_; }
  /// Complex dimension n - 1 of g_alpha.
  int alpha_dim() const { return n_ - 1; }

  /// Flat index of the real (imag = false) or imaginary axis of the k-th complex coordinate of
  /// g_alpha.
  Eigen::Index alpha_index(int k, bool imag) const { return 1 + 2 * k + (imag ? 1 : 0); }
  Eigen::Index z_index() const { return 2 * n_ - 1; }

  friend bool operator==(ModelDim, ModelDim) = default;

private:
  int n_;
};

inline void require_same_dim(ModelDim lhs, ModelDim rhs, const char * where)
{
  if (lhs != rhs) {
    throw DimensionMismatch(std::string(where) + ": model dimensions differ (n = " + std::to_string(lhs.n())
                            + " vs n = " + std::to_string(rhs.n()) + ")");
  }
}

/// An element of a + g_alpha + g_2alpha.
class AlgVec
{
public:
  explicit AlgVec(ModelDim dim) : dim_(dim), coords_(Eigen::VectorXd::Zero(dim.real_dim())) {}

  AlgVec(ModelDim dim, Eigen::VectorXd coords) : dim_(dim), coords_(std::move(coords))
  {
    if (coords_.size() != dim_.real_dim()) {
      throw DimensionMismatch("AlgVec: expected " + std::to_string(dim_.real_dim()) + " coordinates, got "
                              + std::to_string(coords_.size()));
    }
  }

  static AlgVec B(ModelDim dim)
  {
    AlgVec v(dim);
    v.coords_(0) = 1.0;
    return v;
  }

  static AlgVec Z(ModelDim dim)
  {
    AlgVec v(dim);
    v.coords_(dim.z_index()) = 1.0;
    return v;
  }

  /// Unit vector along the real or imaginary axis of the k-th coordinate of g_alpha.
  static AlgVec alpha_axis(ModelDim dim, int k, bool imag = false)
  {
    if (k < 0 || k >= dim.alpha_dim()) { throw InvalidInput("alpha_axis: coordinate index out of range"); }
    AlgVec v(dim);
    v.coords_(dim.alpha_index(k, imag)) = 1.0;
    return v;
  }

  static AlgVec from_parts(ModelDim dim, double a, const Eigen::VectorXcd & v, double z)
  {
    if (v.size() != dim.alpha_dim()) { throw DimensionMismatch("AlgVec::from_parts: g_alpha part has wrong length"); }
    AlgVec out(dim);
    out.coords_(0) = a;
    for (int k = 0; k < dim.alpha_dim(); ++k) {
      out.coords_(dim.alpha_index(k, false)) = v(k).real();
      out.coords_(dim.alpha_index(k, true))  = v(k).imag();
    }
    out.coords_(dim.z_index()) = z;
    return out;
  }

  ModelDim dim() const { return dim_; }
  const Eigen::VectorXd & coords() const { return coords_; }

  /// B-coefficient.
  double a() const { return coords_(0); }
  /// Z-coefficient.
  double z() const { return coords_(dim_.z_index()); }

  Eigen::VectorXcd v() const
  {
    Eigen::VectorXcd out(dim_.alpha_dim());
    for (int k = 0; k < dim_.alpha_dim(); ++k) {
      out(k) = {coords_(dim_.alpha_index(k, false)), coords_(dim_.alpha_index(k, true))};
    }
    return out;
  }

  /// Orthogonal projection onto g_alpha.
  AlgVec alpha_part() const
  {
    AlgVec out = *this;
    out.coords_(0)              = 0.0;
    out.coords_(dim_.z_index()) = 0.0;
    return out;
  }

  double norm() const { return coords_.norm(); }
  double squared_norm() const { return coords_.squaredNorm(); }

  AlgVec & operator+=(const AlgVec & o)
  {
    require_same_dim(dim_, o.dim_, "AlgVec::operator+=");
    coords_ += o.coords_;
    return *this;
  }
  AlgVec & operator-=(const AlgVec & o)
  {
    require_same_dim(dim_, o.dim_, "AlgVec::operator-=");
    coords_ -= o.coords_;
    return *this;
  }
  AlgVec & operator*=(double s)
  {
    coords_ *= s;
    return *this;
  }

  friend AlgVec operator+(AlgVec lhs, const AlgVec & rhs) { return lhs += rhs; }
  friend AlgVec operator-(AlgVec lhs, const AlgVec & rhs) { return lhs -= rhs; }
  friend AlgVec operator*(double s, AlgVec v) { return v *= s; }
  friend AlgVec operator*(AlgVec v, double s) { return v *= s; }
  friend AlgVec operator/(AlgVec v, double s) { return v *= 1.0 / s; }
  friend AlgVec operator-(AlgVec v) { return v *= -1.0; }

  friend bool operator==(const AlgVec & lhs, const AlgVec & rhs)
  {
    return lhs.dim_ == rhs.dim_ && lhs.coords_ == rhs.coords_;
  }

private:
  ModelDim dim_;
  Eigen::VectorXd coords_;
};

inline double inner(const AlgVec & x, const AlgVec & y)
{
  require_same_dim(x.dim(), y.dim(), "inner");
  return x.coords().dot(y.coords());
}

/// Complex structure: J(aB + v + zZ) = -zB + iv + aZ.
inline AlgVec J(const AlgVec & x)
{
  const ModelDim dim = x.dim();
  const auto & c     = x.coords();
  Eigen::VectorXd out(dim.real_dim());
  out(0)             = -c(dim.z_index());
  out(dim.z_index()) = c(0);
  for (int k = 0; k < dim.alpha_dim(); ++k) {
    const Eigen::Index re = dim.alpha_index(k, false);
    out(re)               = -c(re + 1);
    out(re + 1)           = c(re);
  }
  return AlgVec(dim, std::move(out));
}

/// Lie bracket determined by [B,Z] = Z, [B,U] = U/2, [U,V] = <JU,V> Z, [U,Z] = 0.
inline AlgVec bracket(const AlgVec & x, const AlgVec & y)
{
  require_same_dim(x.dim(), y.dim(), "bracket");
  const ModelDim dim = x.dim();
  const double a1 = x.a(), a2 = y.a();
  const AlgVec u = x.alpha_part(), v = y.alpha_part();

  AlgVec out = 0.5 * (a1 * v - a2 * u);
  Eigen::VectorXd c = out.coords();
  c(dim.z_index())  = a1 * y.z() - a2 * x.z() + inner(J(u), v);
  return AlgVec(dim, std::move(c));
}

/// rho(t) = (e^t - 1)/t, rho(0) = 1.
inline double rho(double t)
{
  if (std::abs(t) < 1e-5) { return 1.0 + t / 2.0 + t * t / 6.0 + t * t * t / 24.0; }
  return std::expm1(t) / t;
}

/// A point of AN (equivalently of CH^n via g -> g(o)), stored in exponential
/// coordinates g = Exp(xi). Exp is a global diffeomorphism a + n -> AN.
class GroupElement
{
public:
  explicit GroupElement(AlgVec xi) : xi_(std::move(xi)) {}

  static GroupElement identity(ModelDim dim) { return GroupElement(AlgVec(dim)); }
  static GroupElement exp(AlgVec xi) { return GroupElement(std::move(xi)); }

  const AlgVec & xi() const { return xi_; }
  ModelDim dim() const { return xi_.dim(); }

private:
  AlgVec xi_;
};

namespace detail {

// Semidirect coordinates (a, P, p): Exp(bB + X + yZ) <-> (b, rho(b/2) X, rho(b) y).
struct Semidirect
{
  double a;
  AlgVec P;
  double p;
};

inline Semidirect to_semidirect(const AlgVec & xi)
{
  const double b = xi.a();
  return {b, rho(b / 2.0) * xi.alpha_part(), rho(b) * xi.z()};
}

inline AlgVec from_semidirect(const Semidirect & s)
{
  AlgVec out = s.P / rho(s.a / 2.0);
  Eigen::VectorXd c = out.coords();
  c(0)                        = s.a;
  c(out.dim().z_index())      = s.p / rho(s.a);
  return AlgVec(out.dim(), std::move(c));
}

}  // namespace detail

/// Product law in semidirect coordinates:
/// (a,P,p)(b,Q,q) = (a+b, P + e^{a/2} Q, p + e^a q + <JP, e^{a/2} Q>/2).
inline GroupElement group_multiply(const GroupElement & g1, const GroupElement & g2)
{
  require_same_dim(g1.dim(), g2.dim(), "group_multiply");
  const auto s1 = detail::to_semidirect(g1.xi());
  const auto s2 = detail::to_semidirect(g2.xi());

  const double ea2   = std::exp(s1.a / 2.0);
  const AlgVec Qs    = ea2 * s2.P;
  detail::Semidirect prod{s1.a + s2.a, s1.P + Qs, s1.p + std::exp(s1.a) * s2.p + 0.5 * inner(J(s1.P), Qs)};
  return GroupElement(detail::from_semidirect(prod));
}

inline GroupElement group_inverse(const GroupElement & g) { return GroupElement(-g.xi()); }

inline GroupElement operator*(const GroupElement & g1, const GroupElement & g2) { return group_multiply(g1, g2); }

/// Ad(Exp(bB + X + yZ))(aB + Y + xZ)
///   = aB + e^{b/2} Y - (a/2) rho(b/2) X + (x e^b - a y rho(b) + e^{b/2} rho(b/2) <JX,Y>) Z.
inline AlgVec adjoint(const GroupElement & g, const AlgVec & y)
{
  require_same_dim(g.dim(), y.dim(), "adjoint");
  const ModelDim dim = y.dim();
  const AlgVec & xi  = g.xi();
  const double b = xi.a(), yz = xi.z();
  const AlgVec X = xi.alpha_part();
  const double a = y.a(), x = y.z();
  const AlgVec Y = y.alpha_part();

  const double eb2 = std::exp(b / 2.0);
  const double rh2 = rho(b / 2.0);

  AlgVec out = eb2 * Y - (0.5 * a * rh2) * X;
  Eigen::VectorXd c = out.coords();
  c(0)              = a;
  c(dim.z_index())  = x * std::exp(b) - a * yz * rho(b) + eb2 * rh2 * inner(J(X), Y);
  return AlgVec(dim, std::move(c));
}

/// Truncated exponential series sum_{k=0}^{terms} ad(xi)^k y / k!, built from bracket only.
inline AlgVec adjoint_series_oracle(const GroupElement & g, const AlgVec & y, int terms)
{
  require_same_dim(g.dim(), y.dim(), "adjoint_series_oracle");
  if (terms < 1) { throw InvalidInput("adjoint_series_oracle: terms must be >= 1"); }
  AlgVec sum  = y;
  AlgVec term = y;
  for (int k = 1; k <= terms; ++k) {
    term = bracket(g.xi(), term) / static_cast<double>(k);
    sum += term;
  }
  return sum;
}

/// ||x - y|| relative to the magnitude of the inputs, with floor 1.
inline double relative_residual(const AlgVec & x, const AlgVec & y)
{
  require_same_dim(x.dim(), y.dim(), "relative_residual");
  return (x.coords() - y.coords()).norm() / std::max({1.0, x.norm(), y.norm()});
}

}  // namespace cr
