#include <gtest/gtest.h>

#include <cmath>

#include "geodnc/dnc.hpp"
#include "geodnc/errmodel.hpp"
#include "geodnc/harness.hpp"
#include "test_util.hpp"

using namespace geodnc;

TEST(Schedule, DeskDefaults) {
  const ParameterSchedule s = schedule(16, 1, 3, 0.1, Profile::Desk);
  EXPECT_EQ(s.h, 1);
  EXPECT_EQ(s.Delta, 2);
  EXPECT_EQ(s.K, 2);
  EXPECT_EQ(s.T, 2);
  EXPECT_EQ(s.slice_width, 2);
  EXPECT_EQ(s.max_gap, 0);
  EXPECT_EQ(s.z_width, 10);
  EXPECT_EQ(s.w0, 10);
  EXPECT_DOUBLE_EQ(s.eps, 0.025);
  // ceil(4 / (3 log2(4/3))) = ceil(3.21)
  EXPECT_EQ(s.eta, 4);
  EXPECT_EQ(s.eta_for(2), 5);
}

TEST(Schedule, PaperDefaults) {
  const ParameterSchedule s = schedule(1 << 10, 2, 3, 0.1, Profile::Paper);
  EXPECT_EQ(s.Delta, 10);
  EXPECT_EQ(s.K, 1000);
  EXPECT_EQ(s.h, 10000000);
  EXPECT_EQ(s.slice_width, 20);
  EXPECT_EQ(s.max_gap, 20);
  EXPECT_NEAR(s.eps, e2(0.1, 1 << 10), 1e-300);
  EXPECT_THROW(schedule(3, 1, 3, 0.1, Profile::Paper), Error);
}

TEST(Schedule, OverridesAndValidation) {
  ScheduleOverrides o;
  o.Delta = 3;
  o.eta = 2;
  const ParameterSchedule s = schedule(20, 1, 3, 0.1, Profile::Desk, o);
  EXPECT_EQ(s.Delta, 3);
  EXPECT_EQ(s.z_width, 12);
  EXPECT_EQ(s.eta, 2);
  EXPECT_EQ(s.eta_for(2), 2);
  ScheduleOverrides bad;
  bad.slice_width = 1;
  EXPECT_THROW(schedule(20, 1, 3, 0.1, Profile::Desk, bad), Error);
  bad = {};
  bad.z_width = 3;
  EXPECT_THROW(schedule(20, 1, 3, 0.1, Profile::Desk, bad), Error);
  bad = {};
  bad.eps_factor = 0;
  EXPECT_THROW(schedule(20, 1, 3, 0.1, Profile::Desk, bad), Error);
  EXPECT_THROW(schedule(20, 1, 1, 0.1, Profile::Desk), Error);
  EXPECT_THROW(schedule(20, 1, 3, 0.0, Profile::Desk), Error);
  EXPECT_THROW(parse_profile("fast"), Error);
  EXPECT_EQ(to_json(s)["Delta"], 3);
}

TEST(Driver, Thresholds) {
  EXPECT_NEAR(heavy_threshold(0.25, 1), (0.5 + 0.25) / 2, 1e-15);
  // n = 4: 1 / 4^{log^2 4} = 2^-8.
  EXPECT_NEAR(brute_force_threshold(4), std::exp2(-8), 1e-18);
}

TEST(Driver, SlicesInRangeAreAnchored) {
  const ParameterSchedule s = schedule(16, 1, 3, 0.1, Profile::Desk);
  const auto sl = slices_in_range(3, 10, 2, 1, s);
  ASSERT_EQ(sl.size(), 3u);
  EXPECT_EQ(sl.front(), (Slice{2, 3, 5}));
  EXPECT_EQ(sl.back(), (Slice{2, 7, 9}));
  EXPECT_TRUE(slices_in_range(4, 4, 2, 1, s).empty());
}

TEST(Driver, RegionZPicksLeftMostHeavy) {
  ScheduleOverrides o;
  o.z_width = 10;
  const ParameterSchedule s = schedule(64, 1, 3, 0.1, Profile::Desk, o);
  std::vector<Slice> dense;
  for (int lo = 0; lo + 2 <= 60; lo += 2) dense.push_back({2, lo, lo + 2});
  const RegionZ z = select_region(0, 60, 2, s, dense);
  EXPECT_EQ(z.z, (Slice{2, 25, 35}));
  ASSERT_EQ(z.chosen.size(), 2u);
  EXPECT_EQ(z.chosen[0], (Slice{2, 26, 28}));
  EXPECT_EQ(z.chosen[1], (Slice{2, 28, 30}));
  const std::vector<Slice> sparse = {{2, 0, 2}, {2, 30, 32}};
  try {
    select_region(0, 60, 2, s, sparse);
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("spacing precondition"), std::string::npos);
  }
}

TEST(Driver, SigmaSubsetsLexicographic) {
  EXPECT_TRUE(sigma_subsets(0, 1).empty());
  const auto s = sigma_subsets(0, 3);
  ASSERT_EQ(s.size(), 3u);
  EXPECT_EQ(s[0], std::vector<int>{1});
  EXPECT_EQ(s[1], (std::vector<int>{1, 2}));
  EXPECT_EQ(s[2], std::vector<int>{2});
  EXPECT_EQ(sigma_subsets(1, 5).size(), 7u);
}

TEST(Driver, CombineHandValues) {
  // Delta = 2, K = 1: s0/k0^5 + s1/k1^5 - d01/(k0 k1)^5.
  std::map<std::pair<int, int>, double> dbl{{{0, 1}, 0.25}};
  const double v = inclusion_exclusion_combine({0.5, 0.5}, dbl, {}, {1.0, 0.5}, 1, 2);
  EXPECT_NEAR(v, 0.5 + 0.5 * 32 - 0.25 * 32, 1e-12);
  // Delta = 3 adds sigma = {1} to the (0, 2) pair with sign +.
  std::map<std::pair<int, int>, double> d3{{{0, 1}, 0.1}, {{0, 2}, 0.2}, {{1, 2}, 0.3}};
  std::map<SigmaKey, double> m3{{{0, 2, {1}}, 0.05}};
  const double w = inclusion_exclusion_combine({1, 1, 1}, d3, m3, {1, 1, 1}, 2, 3);
  EXPECT_NEAR(w, 3 - 0.6 + 0.05, 1e-14);
  EXPECT_THROW(inclusion_exclusion_combine({1, 1, 1}, d3, {}, {1, 1, 1}, 2, 3), Error);
  EXPECT_THROW(inclusion_exclusion_combine({1}, {}, {}, {0.0}, 2, 1), Error);
  EXPECT_THROW(inclusion_exclusion_combine({1, 1}, {}, {}, {1, 1}, 2, 2), Error);
}

TEST(Driver, IdentityCircuitIsAllHeavyAndExact) {
  const LatticeCircuit c = identity_circuit({1, 1, 14});
  const ParameterSchedule s = schedule(14, 1, 3, 0.1, Profile::Desk);
  Estimator est(s, exact_base());
  const Synthesis syn = synthesis_of_circuit(c);
  const HeavyResult h = est.heavy_slices(syn, slices_in_range(0, 14, 2, 1, s), 0.1, 3);
  EXPECT_EQ(h.heavy.size(), 7u);
  EXPECT_TRUE(h.enough);
  const EstimateResult r = estimate(c, s, exact_base());
  EXPECT_NEAR(r.value, 1.0, 1e-12);
  EXPECT_EQ(r.trace.outcome, "recursive");
}

TEST(Driver, AllOnesOutputHasNoHeavySlices) {
  LatticeCircuit c = identity_circuit({1, 1, 12});
  for (int q = 0; q < 12; ++q) c.layers[0].push_back({{q}, gates::X(), -1, "X"});
  const ParameterSchedule s = schedule(12, 1, 3, 0.1, Profile::Desk);
  Estimator est(s, exact_base());
  const HeavyResult h =
      est.heavy_slices(synthesis_of_circuit(c), slices_in_range(0, 12, 2, 1, s), 0.1, 3);
  EXPECT_TRUE(h.heavy.empty());
  EXPECT_FALSE(h.enough);
  const EstimateResult r = estimate(c, s, exact_base());
  EXPECT_EQ(r.value, 0.0);
  EXPECT_EQ(r.trace.outcome, "too-few-heavy");
}

TEST(Driver, ObserverSeesEveryClassification) {
  const LatticeCircuit c = embed_dimension(fixtures::random_circuit({12}, 1, 4, "weak", 0.5), 3);
  const ParameterSchedule s = schedule(12, 1, 3, 0.1, Profile::Desk);
  Estimator est(s, exact_base());
  int seen = 0;
  est.set_observer([&](const SliceClassification& sc) {
    ++seen;
    EXPECT_EQ(sc.heavy, sc.estimate >= sc.threshold);
  });
  est.a_full(synthesis_of_circuit(c), 0.1, 3);
  EXPECT_EQ(seen, 6);
}

TEST(Driver, DepthOneEstimatesAreExact) {
  // Depth-1 circuits factor across every slice, so the recursion is exact.
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const LatticeCircuit c = embed_dimension(fixtures::random_circuit({14}, 1, seed, "weak", 0.7), 3);
    const ParameterSchedule s = schedule(14, 1, 3, 0.05, Profile::Desk);
    const EstimateResult r = estimate(c, s, exact_base());
    EXPECT_NEAR(r.value, synthesis_value_exact(synthesis_of_circuit(c)), 1e-10);
  }
}

TEST(Driver, EntangledCutsStayWithinDelta) {
  ScheduleOverrides o;
  o.Delta = 1;
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const LatticeCircuit c = embed_dimension(fixtures::random_circuit({16}, 2, seed, "weak", 0.5), 3);
    for (CutMode mode : {CutMode::ExactSpectral, CutMode::PowerEncoding}) {
      const ParameterSchedule s = schedule(16, 2, 3, 0.1, Profile::Desk, o);
      CutCalculus calc;
      calc.mode = mode;
      const EstimateResult r = estimate(c, s, exact_base(), calc);
      EXPECT_NEAR(r.value, synthesis_value_exact(synthesis_of_circuit(c)), 0.1);
    }
  }
}

TEST(Driver, RejectsMismatchedInput) {
  const LatticeCircuit c = identity_circuit({1, 12});
  EXPECT_THROW(estimate(c, schedule(12, 1, 3, 0.1, Profile::Desk), exact_base()), Error);
  Estimator est(schedule(12, 1, 3, 0.1, Profile::Desk), exact_base());
  EXPECT_THROW(est.a_full(synthesis_of_circuit(c), 0.1, 3), Error);
}
