#include <set>

#include <gtest/gtest.h>

#include "cr_orbits/congruence.hpp"
#include "cr_orbits/sampling.hpp"

using namespace cr;

namespace {

OrbitQuery query(Sampler & rng, const SubalgebraSpec & s) { return make_query(s, from_structured(s, rng.coords(s))); }

OrbitQuery query_with_key(Sampler & rng, const SubalgebraSpec & s, const std::vector<double> & key)
{
  return make_query(s, from_structured(s, rng.coords_with_key(s, key)));
}

}  // namespace

TEST(HProfile, AnchorsAndMonotonicity)
{
  for (int r = 1; r <= 6; ++r) {
    EXPECT_DOUBLE_EQ(h_profile(0.0, r), r * r / 4.0);
    EXPECT_LT(h_profile(1e6, r), (r + 1.0) * (r + 1.0) / 4.0);
    double prev = h_profile(0.0, r);
    for (double t = 0.05; t < 50.0; t *= 1.3) {
      const double v = h_profile(t, r);
      EXPECT_GT(v, prev);
      EXPECT_GT(h_profile_derivative(t, r), 0.0);
      prev = v;
    }
  }
}

TEST(HProfile, DerivativeMatchesFiniteDifference)
{
  for (int r : {1, 2, 5}) {
    for (double t : {0.01, 0.3, 2.0, 7.5}) {
      const double h  = 1e-5;
      const double fd = (h_profile(t + h, r) - h_profile(t - h, r)) / (2.0 * h);
      EXPECT_NEAR(h_profile_derivative(t, r), fd, 1e-8);
    }
  }
}

TEST(HProfile, InverseRoundTrip)
{
  Sampler rng(41);
  for (int trial = 0; trial < 500; ++trial) {
    const int r    = rng.integer(1, 6);
    const double t = rng.uniform(0.0, 20.0);
    EXPECT_NEAR(h_profile_inverse(h_profile(t, r), r), t, 1e-9 * (1.0 + t * t * t));
  }
  EXPECT_EQ(h_profile_inverse(0.25, 1), 0.0);
  EXPECT_THROW(h_profile_inverse(1.0, 1), InvalidInput);
  EXPECT_THROW(h_profile_inverse(0.5, 0), InvalidInput);
}

TEST(FProfile, Anchors)
{
  const auto [c1, c2] = f_profile(0.0, 0.0, 5.0);
  EXPECT_EQ(c1, 0.0);
  EXPECT_EQ(c2, 0.0);
  for (double z : {0.1, 1.0, 4.0}) {
    const auto [u, v] = f_profile(z, 0.0, 7.0);
    EXPECT_NEAR(u, z / (1.0 + z), 1e-15);
    EXPECT_NEAR(v, 7.0 * z / (1.0 + z), 1e-14);
  }
}

TEST(FProfile, InverseRoundTrip)
{
  Sampler rng(42);
  for (int trial = 0; trial < 500; ++trial) {
    const double a = 3.0 + 2.0 * rng.integer(1, 6);
    const double z = rng.uniform(0.0, 4.0), w = rng.uniform(0.0, 4.0);
    const auto [c1, c2] = f_profile(z, w, a);
    const auto [z2, w2] = f_profile_inverse(c1, c2, a);
    EXPECT_NEAR(z2, z, 1e-9);
    EXPECT_NEAR(w2, w, 1e-9);
  }
  EXPECT_THROW(f_profile_inverse(0.5, 1.0, 4.0), InvalidInput);
  EXPECT_THROW(f_profile_inverse(1.0, 1.0, 5.0), InvalidInput);
}

TEST(AcrzProfile, InverseRoundTrip)
{
  for (int k : {0, 1, 4}) {
    for (double t : {0.0, 0.5, 3.0, 40.0}) { EXPECT_NEAR(acrz_profile_inverse(mean_sq_kind_acrz(t, k), k), t, 1e-9 * (1.0 + t)); }
  }
  EXPECT_THROW(acrz_profile_inverse(-0.1, 0), InvalidInput);
  EXPECT_THROW(acrz_profile_inverse(9.0 / 4.0, 0), InvalidInput);
}

TEST(KindAr, ParametersRecoveredFromNumericInvariants)
{
  Sampler rng(43);
  for (int trial = 0; trial < 100; ++trial) {
    const ModelDim dim(rng.integer(3, 5));
    const SubalgebraSpec s{Kind::AR, 0, rng.integer(1, dim.alpha_dim() - 1), dim};
    const OrbitQuery q         = query(rng, s);
    const CongruenceKey key    = congruence_key(q);
    const ExtrinsicInvariants inv = orbit_invariants(pulled_back_tangent(q));
    const auto [w, y]          = recover_kind_ar_parameters(inv.mean_sq, *inv.second_fundamental_sq, s.dim_r);
    EXPECT_NEAR(w, key.scalars[0], 1e-6);
    EXPECT_NEAR(y, key.scalars[1], 1e-6);
  }
}

TEST(Gap, TypeIAndIIAlwaysSeparated)
{
  for (int r = 1; r <= 8; ++r) {
    for (double t : {0.0, 0.7, 10.0}) {
      EXPECT_GT(type_i_ii_gap(r, t), 0.0);
      // 4 (||H_II||^2 - h(t)) (1 + t)^2 = gap with ||H_II||^2 for c = 0, dim r - 1.
      EXPECT_NEAR(4.0 * (mean_sq_kind_crz(r - 1) - h_profile(t, r)) * (1.0 + t) * (1.0 + t), type_i_ii_gap(r, t), 1e-12);
    }
  }
}

TEST(Keys, Examples)
{
  const ModelDim dim(3);
  const SubalgebraSpec crz{Kind::CRZ, 1, 0, dim};
  const CongruenceKey k = congruence_key(make_query(crz, GroupElement::identity(dim)));
  EXPECT_EQ(k.kind, TypeTag::II);
  EXPECT_TRUE(k.scalars.empty());

  const SubalgebraSpec r{Kind::R, 0, 1, dim};
  StructuredCoords c{0.0, Eigen::VectorXd::Constant(1, 1.0), Eigen::VectorXd::Zero(2), 0.0};
  EXPECT_NEAR(congruence_key(make_query(r, from_structured(r, c))).scalars.at(0), 1.0, 1e-15);
  c.b = 2.0;
  EXPECT_NEAR(congruence_key(make_query(r, from_structured(r, c))).scalars.at(0), 1.0 - std::exp(-1.0), 1e-14);

  const SubalgebraSpec ar{Kind::AR, 0, 1, dim};
  StructuredCoords d{0.0, Eigen::VectorXd::Constant(1, 0.3), Eigen::VectorXd::Zero(2), 0.0};
  EXPECT_THROW(congruence_key(make_query(ar, from_structured(ar, d))), NotCR);
}

TEST(Keys, KindIMatchesMeanCurvatureOracle)
{
  Sampler rng(44);
  for (int trial = 0; trial < 200; ++trial) {
    const ModelDim dim(rng.integer(2, 5));
    const SubalgebraSpec s = rng.spec(Kind::R, dim);
    const OrbitQuery q     = query(rng, s);
    EXPECT_NEAR(congruence_key(q).scalars.at(0), reduced_displacement_oracle(q), 1e-7);
  }
}

TEST(Keys, InvariantUnderReembedding)
{
  Sampler rng(45);
  for (int trial = 0; trial < 50; ++trial) {
    const ModelDim dim(rng.integer(2, 5));
    const SubalgebraSpec s = rng.spec(kAllKinds[rng.integer(0, 3)], dim);
    const GroupElement g0  = from_structured(s, rng.coords(s));
    // The conjugated subalgebra must itself have a CR orbit through o.
    const GroupElement k   = from_structured(s, rng.coords(s));
    const Subspace h       = adjoint_image(group_inverse(k), build_subalgebra(s));
    const CongruenceKey a  = congruence_key(make_query(s, g0));
    const CongruenceKey b  = congruence_key(make_query(h, group_inverse(k) * g0));
    EXPECT_TRUE(keys_equal(a, b)) << to_string(s.kind);
  }
}

TEST(Decide, SameKeyMeansCongruentAndEqualMeanCurvature)
{
  Sampler rng(46);
  for (Kind kind : kAllKinds) {
    for (int trial = 0; trial < 25; ++trial) {
      const ModelDim dim(rng.integer(2, 5));
      const SubalgebraSpec s = rng.spec(kind, dim);
      const std::vector<double> key = congruence_key(query(rng, s)).scalars;
      const OrbitQuery q1 = query_with_key(rng, s, key), q2 = query_with_key(rng, s, key);
      const CongruenceDecision d = are_congruent(q1, q2);
      EXPECT_TRUE(d.congruent) << d.reason;
      const ExtrinsicInvariants i1 = orbit_invariants(pulled_back_tangent(q1));
      const ExtrinsicInvariants i2 = orbit_invariants(pulled_back_tangent(q2));
      EXPECT_NEAR(i1.mean_sq, i2.mean_sq, 1e-8);
      EXPECT_NEAR(*i1.second_fundamental_sq, *i2.second_fundamental_sq, 1e-8);
    }
  }
}

TEST(Decide, DistinctKeysAreSeparated)
{
  Sampler rng(47);
  const ModelDim dim(4);
  const SubalgebraSpec r{Kind::R, 0, 2, dim};
  EXPECT_FALSE(are_congruent(query_with_key(rng, r, {0.5}), query_with_key(rng, r, {0.6})).congruent);
  const SubalgebraSpec ar{Kind::AR, 0, 1, dim};
  EXPECT_FALSE(are_congruent(query_with_key(rng, ar, {0.5, 0.2}), query_with_key(rng, ar, {0.5, 0.3})).congruent);
  const SubalgebraSpec acrz{Kind::ACRZ, 1, 1, dim};
  EXPECT_FALSE(are_congruent(query_with_key(rng, acrz, {0.5}), query_with_key(rng, acrz, {1.5})).congruent);
}

TEST(Decide, KindIIIsSignSymmetric)
{
  const ModelDim dim(3);
  const SubalgebraSpec ar{Kind::AR, 0, 1, dim};
  const StructuredCoords up{0.0, Eigen::VectorXd::Zero(1), Eigen::VectorXd::Zero(2), 0.8};
  StructuredCoords down = up;
  down.y = -0.8;
  EXPECT_TRUE(are_congruent(make_query(ar, from_structured(ar, up)), make_query(ar, from_structured(ar, down))).congruent);
}

TEST(Decide, CrossTypeNeverCongruent)
{
  Sampler rng(48);
  const ModelDim dim(3);
  for (int trial = 0; trial < 40; ++trial) {
    const int i = rng.integer(0, 3), j = (i + rng.integer(1, 3)) % 4;
    const SubalgebraSpec s1 = rng.spec(kAllKinds[i], dim), s2 = rng.spec(kAllKinds[j], dim);
    const CongruenceDecision d = are_congruent(query(rng, s1), query(rng, s2));
    EXPECT_FALSE(d.congruent);
    EXPECT_FALSE(d.reason.empty());
  }
}

TEST(Decide, DifferentDimensionsAreNotCongruent)
{
  const ModelDim dim(4);
  const SubalgebraSpec a{Kind::CRZ, 1, 0, dim}, b{Kind::CRZ, 0, 2, dim};
  const CongruenceDecision d = are_congruent(make_query(a, GroupElement::identity(dim)), make_query(b, GroupElement::identity(dim)));
  EXPECT_FALSE(d.congruent);
}

TEST(Decide, RejectsMixedDimensions)
{
  const SubalgebraSpec a{Kind::CRZ, 0, 0, ModelDim(2)}, b{Kind::CRZ, 0, 0, ModelDim(3)};
  EXPECT_THROW(are_congruent(make_query(a, GroupElement::identity(ModelDim(2))), make_query(b, GroupElement::identity(ModelDim(3)))),
               DimensionMismatch);
}

TEST(DisplacementSweep, OnlyReflectedFormMatchesOracle)
{
  const DisplacementSweep sweep = sweep_displacement_forms();
  EXPECT_EQ(sweep.samples, 3 * 9 * 9);
  const auto forms = sweep.consistent_forms();
  ASSERT_EQ(forms.size(), 1u);
  EXPECT_EQ(forms[0], DisplacementForm::RhoReflected);
  for (const auto & e : sweep.entries) {
    if (e.form != DisplacementForm::RhoReflected) { EXPECT_GT(e.max_mean_sq_residual, 1e-3); }
  }
}

TEST(Moduli, SmallestDimension)
{
  const auto m = moduli_space(2);
  ASSERT_EQ(m.size(), 4u);
  EXPECT_EQ(m[0].pieces[0].index_set->elements().size(), 1u);
  const auto ii = m[1].pieces[0].index_set->elements();
  EXPECT_EQ(ii, (std::vector<std::vector<int>>{{0, 0}, {0, 1}, {1, 1}}));
  EXPECT_FALSE(m[2].pieces[0].index_set.has_value());
  EXPECT_EQ(m[2].pieces[0].half_lines, 1);
  EXPECT_EQ(m[3].pieces[1].index_set->elements(), (std::vector<std::vector<int>>{{1, 1}}));
  EXPECT_THROW(moduli_space(1), InvalidInput);
}

TEST(Moduli, LabelsAreABijectionOntoIndexSets)
{
  for (int n = 2; n <= 7; ++n) {
    const ModelDim dim(n);
    const auto m = moduli_space(n);
    for (std::size_t k = 0; k < 4; ++k) {
      std::size_t expected = 0;
      for (const ModuliPiece & p : m[k].pieces) { expected += p.index_set ? p.index_set->elements().size() : 1; }
      std::set<std::pair<std::size_t, std::vector<int>>> labels;
      for (const SubalgebraSpec & s : Sampler::all_specs(kAllKinds[k], dim)) {
        const auto label = moduli_label(s);
        ASSERT_LT(label.first, m[k].pieces.size());
        const auto & piece = m[k].pieces[label.first];
        if (piece.index_set) {
          const auto els = piece.index_set->elements();
          EXPECT_NE(std::find(els.begin(), els.end(), label.second), els.end());
        } else {
          EXPECT_TRUE(label.second.empty());
        }
        labels.insert(label);
      }
      EXPECT_EQ(labels.size(), expected) << "n=" << n << " kind " << k;
      EXPECT_EQ(Sampler::all_specs(kAllKinds[k], dim).size(), expected);
    }
  }
}
