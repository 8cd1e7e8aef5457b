#include <cmath>
#include <random>

#include <gtest/gtest.h>
#include <unsupported/Eigen/MatrixFunctions>

#include "cr_orbits/lie_model.hpp"
#include "cr_orbits/sampling.hpp"

using namespace cr;

namespace {

// Matrix of ad(xi) in the flat basis, assembled column by column from the bracket.
Eigen::MatrixXd ad_matrix(const AlgVec & xi)
{
  const ModelDim dim = xi.dim();
  Eigen::MatrixXd m(dim.real_dim(), dim.real_dim());
  for (Eigen::Index k = 0; k < dim.real_dim(); ++k) {
    m.col(k) = bracket(xi, AlgVec(dim, Eigen::VectorXd::Unit(dim.real_dim(), k))).coords();
  }
  return m;
}

AlgVec real_axis(ModelDim dim, int k) { return AlgVec::alpha_axis(dim, k, false); }

}  // namespace

TEST(Rho, MatchesDefinitionAwayFromZero)
{
  for (double t : {-3.0, -0.5, 1e-3, 0.7, 4.0}) { EXPECT_NEAR(rho(t), std::expm1(t) / t, 1e-15 * std::abs(rho(t))); }
}

TEST(Rho, TaylorBranchIsContinuous)
{
  EXPECT_EQ(rho(0.0), 1.0);
  // Both sides of the branch point agree with the cubic Taylor polynomial.
  for (double t : {-1.00001e-5, -0.99999e-5, 0.99999e-5, 1.00001e-5, -1e-6}) {
    EXPECT_NEAR(rho(t), 1.0 + t / 2.0 + t * t / 6.0 + t * t * t / 24.0, 1e-15);
  }
}

TEST(Rho, ReflectionIdentity)
{
  for (double t : {-2.0, -1e-6, 0.3, 1.7}) { EXPECT_NEAR(rho(-t), std::exp(-t) * rho(t), 1e-14); }
}

TEST(ModelDim, RejectsOutOfRange)
{
  EXPECT_THROW(ModelDim(1), InvalidInput);
  EXPECT_THROW(ModelDim(33), InvalidInput);
  EXPECT_EQ(ModelDim(4).real_dim(), 8);
  EXPECT_EQ(ModelDim(4).alpha_dim(), 3);
}

TEST(AlgVec, EncodingAndNorm)
{
  const ModelDim dim(3);
  const AlgVec x = AlgVec::B(dim) + 2.0 * AlgVec::Z(dim) + AlgVec::alpha_axis(dim, 1, true);
  EXPECT_EQ(x.a(), 1.0);
  EXPECT_EQ(x.z(), 2.0);
  EXPECT_DOUBLE_EQ(x.squared_norm(), 6.0);
  EXPECT_THROW(AlgVec(dim, Eigen::VectorXd::Zero(5)), DimensionMismatch);
}

TEST(ComplexStructure, ActsOnBasis)
{
  const ModelDim dim(2);
  EXPECT_EQ(J(AlgVec::B(dim)), AlgVec::Z(dim));
  EXPECT_EQ(J(AlgVec::Z(dim)), -AlgVec::B(dim));
  EXPECT_EQ(J(real_axis(dim, 0)), AlgVec::alpha_axis(dim, 0, true));
}

TEST(Bracket, StructureRelations)
{
  const ModelDim dim(3);
  Sampler rng(1);
  const AlgVec U = rng.algvec(dim).alpha_part(), V = rng.algvec(dim).alpha_part();
  const AlgVec B = AlgVec::B(dim), Z = AlgVec::Z(dim);
  EXPECT_LT((bracket(B, U) - 0.5 * U).norm(), 1e-15);
  EXPECT_LT((bracket(B, Z) - Z).norm(), 1e-15);
  EXPECT_LT((bracket(U, V) - inner(J(U), V) * Z).norm(), 1e-15);
  EXPECT_EQ(bracket(Z, U).norm(), 0.0);
}

TEST(Bracket, DimensionMismatchThrows)
{
  EXPECT_THROW(bracket(AlgVec::B(ModelDim(2)), AlgVec::B(ModelDim(3))), DimensionMismatch);
}

TEST(Adjoint, IdentityActsTrivially)
{
  Sampler rng(2);
  const AlgVec y = rng.algvec(ModelDim(4));
  EXPECT_EQ(adjoint(GroupElement::identity(ModelDim(4)), y), y);
}

TEST(Adjoint, PureDilation)
{
  const ModelDim dim(3);
  const AlgVec Y = real_axis(dim, 1) + 0.4 * AlgVec::alpha_axis(dim, 0, true);
  const AlgVec out = adjoint(GroupElement::exp(AlgVec::B(dim)), Y);
  EXPECT_LT((out - std::exp(0.5) * Y).norm(), 1e-15);
}

TEST(Adjoint, TranslationOfB)
{
  const ModelDim dim(3);
  const AlgVec X   = 0.3 * real_axis(dim, 0) - 1.2 * AlgVec::alpha_axis(dim, 1, true);
  const AlgVec out = adjoint(GroupElement::exp(X), AlgVec::B(dim));
  EXPECT_LT((out - (AlgVec::B(dim) - 0.5 * X)).norm(), 1e-15);
}

TEST(Adjoint, MatchesMatrixExponentialOfAd)
{
  Sampler rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const ModelDim dim(rng.integer(2, 6));
    const GroupElement g = rng.element(dim, 2.0);
    const AlgVec y       = rng.algvec(dim);
    const Eigen::MatrixXd E = ad_matrix(g.xi()).exp();
    const AlgVec expected(dim, E * y.coords());
    EXPECT_LT(relative_residual(adjoint(g, y), expected), 1e-12);
  }
}

TEST(AdjointSeries, Basics)
{
  const ModelDim dim(3);
  Sampler rng(4);
  const AlgVec y  = rng.algvec(dim);
  const AlgVec xi = rng.algvec(dim);
  EXPECT_EQ(adjoint_series_oracle(GroupElement::identity(dim), y, 40), y);
  EXPECT_LT((adjoint_series_oracle(GroupElement::exp(xi), y, 1) - (y + bracket(xi, y))).norm(), 1e-15);
  EXPECT_THROW(adjoint_series_oracle(GroupElement::exp(xi), y, 0), InvalidInput);
}

TEST(GroupLaw, AbelianFactor)
{
  const ModelDim dim(2);
  const GroupElement g = GroupElement::exp(0.7 * AlgVec::B(dim)) * GroupElement::exp(-1.9 * AlgVec::B(dim));
  EXPECT_LT((g.xi() - (-1.2) * AlgVec::B(dim)).norm(), 1e-15);
}

TEST(GroupLaw, HeisenbergProduct)
{
  const ModelDim dim(4);
  Sampler rng(5);
  const AlgVec U = rng.algvec(dim).alpha_part(), V = rng.algvec(dim).alpha_part();
  const GroupElement g = GroupElement::exp(U) * GroupElement::exp(V);
  EXPECT_LT((g.xi() - (U + V + 0.5 * inner(J(U), V) * AlgVec::Z(dim))).norm(), 1e-14);
}

TEST(GroupLaw, InverseAndIdentity)
{
  const ModelDim dim(3);
  Sampler rng(6);
  EXPECT_EQ(group_inverse(GroupElement::identity(dim)).xi().norm(), 0.0);
  EXPECT_EQ(group_inverse(GroupElement::exp(AlgVec::B(dim))).xi(), -AlgVec::B(dim));
  for (int i = 0; i < 100; ++i) {
    const GroupElement g = rng.element(dim);
    EXPECT_LT((g * group_inverse(g)).xi().norm(), 1e-10);
    EXPECT_LT(relative_residual((g * GroupElement::identity(dim)).xi(), g.xi()), 1e-15);
  }
}

TEST(GroupLaw, AdjointIsHomomorphismOnBasis)
{
  // Ad(g1 g2) = Ad(g1) Ad(g2), with both sides from the series oracle.
  Sampler rng(7);
  const ModelDim dim(3);
  for (int trial = 0; trial < 20; ++trial) {
    const GroupElement g1 = rng.element(dim, 1.5), g2 = rng.element(dim, 1.5);
    for (Eigen::Index k = 0; k < dim.real_dim(); ++k) {
      const AlgVec e(dim, Eigen::VectorXd::Unit(dim.real_dim(), k));
      const AlgVec lhs = adjoint_series_oracle(g1 * g2, e, 60);
      const AlgVec rhs = adjoint_series_oracle(g1, adjoint_series_oracle(g2, e, 60), 60);
      EXPECT_LT(relative_residual(lhs, rhs), 1e-10);
    }
  }
}

TEST(GroupLaw, DimensionMismatchThrows)
{
  EXPECT_THROW(GroupElement::identity(ModelDim(2)) * GroupElement::identity(ModelDim(3)), DimensionMismatch);
}
