// Acceptance criteria 1-10. Each test runs the relevant verification suite at the
// default trial counts, checks the named properties and the runtime budget, and
// prints a single "[criterion N] PASS|FAIL" line.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "cr_orbits/congruence.hpp"
#include "cr_orbits/verify.hpp"

using namespace cr;

namespace {

struct Timed
{
  SuiteReport report;
  double seconds;
};

Timed timed_suite(const std::string & suite)
{
  const auto t0 = std::chrono::steady_clock::now();
  SuiteReport r = run_verify(suite, {}).front();
  const auto t1 = std::chrono::steady_clock::now();
  return {std::move(r), std::chrono::duration<double>(t1 - t0).count()};
}

bool starts_with(const std::string & s, const std::string & prefix) { return s.rfind(prefix, 0) == 0; }

// Checks every property whose name starts with one of `prefixes`; each prefix must match at least once.
struct Verdict
{
  bool ok = true;
  std::vector<std::string> notes;

  void require(bool cond, const std::string & what)
  {
    if (!cond) {
      ok = false;
      notes.push_back(what);
    }
  }

  void properties(const SuiteReport & r, std::initializer_list<const char *> prefixes)
  {
    for (const char * prefix : prefixes) {
      int matched = 0;
      for (const PropertyResult & p : r.properties) {
        if (!starts_with(p.name, prefix)) { continue; }
        ++matched;
        char buf[256];
        std::snprintf(buf, sizeof buf, "%s: %d/%d failed, max residual %.3g (tol %.3g)", p.name.c_str(), p.failures,
                      p.trials, p.max_residual, p.tolerance);
        require(p.passed(), buf);
      }
      require(matched > 0, std::string("no property named ") + prefix + "*");
    }
  }

  void budget(double seconds, double limit)
  {
    char buf[96];
    std::snprintf(buf, sizeof buf, "runtime %.3f s exceeds %.1f s", seconds, limit);
    require(seconds < limit, buf);
  }

  void report(int criterion, const std::string & title, double seconds) const
  {
    std::printf("[criterion %d] %s  %s (%.3f s)\n", criterion, ok ? "PASS" : "FAIL", title.c_str(), seconds);
    for (const std::string & n : notes) { std::printf("    %s\n", n.c_str()); }
    std::fflush(stdout);
  }
};

}  // namespace

TEST(Acceptance, Criterion1_Jacobi)
{
  const Timed t = timed_suite("algebra");
  Verdict v;
  v.properties(t.report, {"jacobi_n2", "jacobi_n3", "jacobi_n4", "jacobi_n6", "jacobi_n8"});
  for (const char * n : {"jacobi_n2", "jacobi_n8"}) { v.require(t.report.find(n)->trials >= 1000, "fewer than 1000 triples"); }
  v.budget(t.seconds, 1.0);
  v.report(1, "Jacobi identity", t.seconds);
  EXPECT_TRUE(v.ok);
}

TEST(Acceptance, Criterion2_AdjointOracle)
{
  const Timed t = timed_suite("algebra");
  Verdict v;
  v.properties(t.report, {"adjoint_matches_series", "adjoint_is_homomorphism"});
  v.require(t.report.find("adjoint_matches_series")->trials >= 1000, "fewer than 1000 (g, y) pairs");
  v.budget(t.seconds, 2.0);
  v.report(2, "adjoint closed form vs series, group law", t.seconds);
  EXPECT_TRUE(v.ok);
}

TEST(Acceptance, Criterion3_Connection)
{
  const Timed t = timed_suite("connection");
  Verdict v;
  v.properties(t.report, {"levi_civita_matches_koszul", "torsion_free", "metric_compatible"});
  v.budget(t.seconds, 1.0);
  v.report(3, "connection vs Koszul, torsion, metric", t.seconds);
  EXPECT_TRUE(v.ok);
}

TEST(Acceptance, Criterion4_Curvature)
{
  const Timed t = timed_suite("curvature");
  Verdict v;
  v.properties(t.report, {"holomorphic_sectional_n"});
  v.budget(t.seconds, 1.0);
  v.report(4, "holomorphic sectional curvature -1", t.seconds);
  EXPECT_TRUE(v.ok);
}

TEST(Acceptance, Criterion5_CrEquivalence)
{
  const Timed t = timed_suite("theoremA");
  Verdict v;
  v.properties(t.report, {"membership_agrees_", "adjoint_image_r", "adjoint_image_ar", "adjoint_image_acrz"});
  for (const char * k : {"R", "CRZ", "AR", "ACRZ"}) {
    const PropertyResult * p = t.report.find(std::string("membership_agrees_") + k);
    v.require(p != nullptr && p->trials >= 200 && p->tolerance == 0.0, std::string("membership check for ") + k);
  }
  v.budget(t.seconds, 5.0);
  v.report(5, "direct CR test agrees with membership predicate", t.seconds);
  EXPECT_TRUE(v.ok);
}

TEST(Acceptance, Criterion6_Slice)
{
  const Timed t = timed_suite("theoremA");
  Verdict v;
  v.properties(t.report, {"slice_roundtrip_"});
  v.budget(t.seconds, 2.0);
  v.report(6, "slice decomposition reproduces g", t.seconds);
  EXPECT_TRUE(v.ok);
}

TEST(Acceptance, Criterion7_ClosedForms)
{
  const Timed t = timed_suite("lemmas4x");
  Verdict v;
  v.properties(t.report, {"closed_form_mean_sq_R", "closed_form_mean_sq_CRZ", "closed_form_mean_sq_AR",
                          "closed_form_mean_sq_ACRZ", "closed_form_second_fundamental_AR", "anchor_values"});
  v.budget(t.seconds, 5.0);
  v.report(7, "closed-form mean curvature and anchors", t.seconds);
  EXPECT_TRUE(v.ok);
}

TEST(Acceptance, Criterion8_Injectivity)
{
  const Timed t = timed_suite("congruence");
  Verdict v;
  v.properties(t.report, {"h_strictly_increasing", "f_inverse_roundtrip"});
  v.require(t.report.find("h_strictly_increasing")->trials >= 8 * 9999, "grid smaller than 10^4 points per r");
  v.budget(t.seconds, 1.0);
  v.report(8, "h monotone, F inverse round trip", t.seconds);
  EXPECT_TRUE(v.ok);
}

TEST(Acceptance, Criterion9_CongruenceSoundness)
{
  const Timed t = timed_suite("congruence");
  Verdict v;
  v.properties(t.report, {"congruent_pairs_equal_mean_sq_", "separated_pairs_", "kind_II_all_congruent",
                          "kind_III_sign_symmetry", "cross_kind_never_congruent", "kind_I_selected_form_matches_oracle",
                          "kind_I_exactly_one_candidate_consistent"});
  v.require(t.report.displacement_sweep.has_value(), "verify report carries no displacement sweep");
  v.budget(t.seconds, 10.0);
  v.report(9, "congruence decision soundness", t.seconds);
  if (t.report.displacement_sweep) {
    for (const auto & e : t.report.displacement_sweep->entries) {
      std::printf("    candidate %-34s max |h - numeric| = %.3g  %s\n", to_string(e.form), e.max_mean_sq_residual,
                  e.consistent ? "consistent" : "inconsistent");
    }
  }
  EXPECT_TRUE(v.ok);
}

TEST(Acceptance, Criterion10_Moduli)
{
  const auto t0 = std::chrono::steady_clock::now();
  using E = std::vector<std::vector<int>>;
  Verdict v;

  const auto m2 = moduli_space(2);
  v.require(m2[0].pieces[0].index_set->elements() == E{{1}}, "n=2 component I");
  v.require(m2[1].pieces[0].index_set->elements() == E{{0, 0}, {0, 1}, {1, 1}}, "n=2 I_{0,1} must have 3 elements");
  v.require(!m2[2].pieces[0].index_set && m2[2].pieces[0].half_lines == 1, "n=2 component III first piece");
  v.require(m2[2].pieces[1].index_set->elements() == E{{1}} && m2[2].pieces[1].half_lines == 2,
            "n=2 component III second piece");
  v.require(m2[3].pieces.size() == 2 && m2[3].pieces[0].index_set->elements() == E{{1}}
                && m2[3].pieces[0].half_lines == 0 && m2[3].pieces[1].index_set->elements() == E{{1, 1}}
                && m2[3].pieces[1].half_lines == 1,
            "n=2 component IV must be {1} + {(1,1)} x [0,inf)");

  const auto m3 = moduli_space(3);
  v.require(m3[0].pieces[0].index_set->elements() == E{{1}, {2}}, "n=3 component I");
  v.require(m3[1].pieces[0].index_set->elements() == E{{0, 0}, {0, 1}, {0, 2}, {1, 1}, {1, 2}, {2, 2}}, "n=3 component II");
  v.require(m3[3].pieces[1].index_set->elements() == E{{1, 1}, {1, 2}, {2, 2}}, "n=3 component IV");

  const auto m5 = moduli_space(5);
  v.require(m5[0].pieces[0].index_set->elements() == E{{1}, {2}, {3}, {4}}, "n=5 component I");
  v.require(m5[1].pieces[0].index_set->elements().size() == 15, "n=5 I_{0,4} must have 15 elements");
  v.require(m5[2].pieces[1].index_set->elements() == E{{1}, {2}, {3}, {4}}, "n=5 component III");
  v.require(m5[3].pieces[0].index_set->elements() == E{{1}, {2}, {3}, {4}}, "n=5 component IV first piece");
  v.require(m5[3].pieces[1].index_set->elements().size() == 10, "n=5 I_{1,4} must have 10 elements");

  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  v.budget(s, 0.1);
  v.report(10, "moduli space index sets", s);
  EXPECT_TRUE(v.ok);
}
