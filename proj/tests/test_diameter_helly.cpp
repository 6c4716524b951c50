#include "helly/diameter_helly.hpp"
#include "helly/errors.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace helly;

namespace {

HPolytope interval(double a, double b) { return HPolytope::box(Vec::Constant(1, a), Vec::Constant(1, b)); }

HPolytope box2(double x0, double y0, double x1, double y1) {
  Vec lo(2), hi(2);
  lo << x0, y0;
  hi << x1, y1;
  return HPolytope::box(lo, hi);
}

struct Iv {
  double a, b;
};

double overlap(const std::vector<Iv>& ivs) {
  double lo = -1e300, hi = 1e300;
  for (auto& iv : ivs) {
    lo = std::max(lo, iv.a);
    hi = std::min(hi, iv.b);
  }
  return std::max(0.0, hi - lo);
}

}  // namespace

TEST(Constants, StoredOnce) {
  const auto& c1 = diameter_constants(1);
  EXPECT_DOUBLE_EQ(c1.delta, 0.5);
  EXPECT_NEAR(c1.hypothesis_threshold, 4.0, 1e-12);
  EXPECT_NEAR(c1.final_bound.value(), 1.0 / 8.0, 1e-15);
  const auto& c2 = diameter_constants(2);
  EXPECT_NEAR(c2.hypothesis_threshold, 256.0, 1e-9);
  EXPECT_EQ(&c1, &diameter_constants(1));
}

TEST(Directional, IntervalsAgainstExhaustiveOracle) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(0, 3), L(0.5, 4);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::vector<Iv>> cls(2);
    ColorFamilies F{1, {{}, {}}};
    for (int c = 0; c < 2; ++c)
      for (int k = 0; k < 1 + trial % 4; ++k) {
        double a = U(rng), b = a + L(rng);
        cls[c].push_back({a, b});
        F.families[c].push_back(interval(a, b));
      }
    auto r = directional_colorful_check(F, Vec::Ones(1));
    bool all_rainbows_wide = true;
    for (auto& x : cls[0])
      for (auto& y : cls[1]) all_rainbows_wide = all_rainbows_wide && overlap({x, y}) >= 1.0;
    if (r.class_index) {
      EXPECT_GE(overlap(cls[*r.class_index]), 1.0 - 1e-9);
    } else {
      ASSERT_TRUE(r.violation.has_value());
      auto& p = r.violation->picks;
      EXPECT_LT(overlap({cls[0][p[0]], cls[1][p[1]]}), 1.0);
      EXPECT_FALSE(all_rainbows_wide);
    }
  }
}

TEST(Directional, SingletonClassesAndEmptyRainbow) {
  ColorFamilies F{1, {{interval(0, 2)}, {interval(-1, 3)}}};
  auto r = directional_colorful_check(F, Vec::Ones(1));
  ASSERT_TRUE(r.class_index.has_value());
  EXPECT_NEAR(r.width, 2.0, 1e-12);
  ColorFamilies G{1, {{interval(0, 0.5), interval(0, 5)}, {interval(3, 3.5)}}};
  auto v = directional_colorful_check(G, Vec::Ones(1));
  ASSERT_TRUE(v.violation.has_value());
  EXPECT_EQ(v.violation->picks, (std::vector<int>{0, 0}));
  EXPECT_EQ(v.width, 0.0);
}

TEST(CoreSubfamily, Examples) {
  auto core = qhd_core_subfamily({interval(0, 1), interval(0.8, 2), interval(0.9, 3)}, 1);
  EXPECT_LE(core.size(), 2u);
  std::vector<HPolytope> sub;
  std::vector<HPolytope> fam{interval(0, 1), interval(0.8, 2), interval(0.9, 3)};
  for (int i : core) sub.push_back(fam[i]);
  EXPECT_LT(intersection_diameter(sub), 1.0);
  // exhaustive: {0,2} gives [0.9,1], diameter 0.1, the smallest
  EXPECT_EQ(core, (std::vector<int>{0, 2}));
  auto two = qhd_core_subfamily({interval(0, 0.3), interval(0.1, 2)}, 1);
  EXPECT_EQ(two, (std::vector<int>{0, 1}));
  auto point = qhd_core_subfamily({interval(0, 1), interval(1, 2), interval(-5, 5)}, 1);
  EXPECT_LT(intersection_diameter({fam[0]}), 1.5);
  EXPECT_LE(point.size(), 2u);
  EXPECT_THROW(qhd_core_subfamily({interval(0, 3)}, 1), PreconditionError);
}

TEST(CoreSubfamily, TwoDimensionalExhaustive) {
  std::vector<HPolytope> fam{box2(0, 0, 0.1, 5), box2(0, 0, 5, 0.1), box2(-3, -3, 3, 3), box2(0.05, -1, 2, 2)};
  auto core = qhd_core_subfamily(fam, 2);
  EXPECT_LE(core.size(), 4u);
  std::vector<HPolytope> sub;
  for (int i : core) sub.push_back(fam[i]);
  EXPECT_LT(intersection_diameter(sub), 1.0);
}

TEST(Select, BigSingletonsSelectEitherClass) {
  ColorFamilies F{1, {{interval(0, 100)}, {interval(0, 100)}}};
  auto r = colorful_diameter_select(F);
  ASSERT_EQ(r.outcome, DiameterOutcome::ClassSelected);
  EXPECT_NEAR(r.measured_diameter, 100.0, 1e-9);
}

TEST(Select, SmallRainbowIsViolation) {
  ColorFamilies F{1, {{interval(0, 10)}, {interval(5, 6)}}};
  auto r = colorful_diameter_select(F);
  ASSERT_EQ(r.outcome, DiameterOutcome::HypothesisViolation);
  EXPECT_EQ(r.violation.picks, (std::vector<int>{0, 0}));
  EXPECT_NEAR(r.violation_diameter, 1.0, 1e-12);
}

TEST(Select, RandomBoxesInTwoDimensions) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> U(0, 50);
  for (int trial = 0; trial < 20; ++trial) {
    ColorFamilies F{2, std::vector<std::vector<HPolytope>>(4)};
    for (int c = 0; c < 4; ++c)
      for (int k = 0; k < 1 + (trial + c) % 3; ++k)
        F.families[c].push_back(box2(-U(rng), -U(rng), 200 + U(rng), 200 + U(rng)));
    auto r = colorful_diameter_select(F);
    ASSERT_EQ(r.outcome, DiameterOutcome::ClassSelected);
    EXPECT_GT(intersection_diameter(F.families[r.class_index]), 1.0 / 8 - 1e-9);
  }
}

TEST(Select, ViolationInvariant) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(0, 6);
  for (int trial = 0; trial < 50; ++trial) {
    ColorFamilies F{1, {{}, {}}};
    for (int c = 0; c < 2; ++c)
      for (int k = 0; k < 3; ++k) {
        double a = U(rng);
        F.families[c].push_back(interval(a, a + U(rng)));
      }
    auto r = colorful_diameter_select(F);
    if (r.outcome == DiameterOutcome::HypothesisViolation) {
      std::vector<HPolytope> sets{F.families[0][r.violation.picks[0]], F.families[1][r.violation.picks[1]]};
      EXPECT_LE(intersection_diameter(sets), 4.0 + 1e-9);
    } else {
      ASSERT_EQ(r.outcome, DiameterOutcome::ClassSelected);
      EXPECT_GT(intersection_diameter(F.families[r.class_index]), 0.5 - 1e-9);
    }
  }
}

TEST(Select, SamplingModeFlagsIncomplete) {
  ColorFamilies F{1, {{interval(0, 100), interval(-1, 100)}, {interval(0, 100), interval(0, 99)}}};
  DiameterSelectOptions opt;
  opt.max_rainbows = 2;
  opt.sampled_rainbows = 20;
  auto r = colorful_diameter_select(F, opt);
  EXPECT_FALSE(r.complete);
  EXPECT_EQ(r.outcome, DiameterOutcome::ClassSelected);
}

TEST(Diagnostic, PigeonholeOnConstructedInstances) {
  // Every class intersects to a tiny set, so the trace must exhibit a
  // rainbow with large witness measure and small diameter.
  ColorFamilies F1{1, {{interval(0, 1), interval(0.95, 3)}, {interval(2, 2.5), interval(2.45, 4)}}};
  auto t1 = diameter_diagnostic_trace(F1, 2000, 3);
  EXPECT_TRUE(t1.samples_covered);
  EXPECT_GE(t1.r0_measure, t1.measure_threshold);
  EXPECT_LE(t1.r0_diameter, t1.zone_bound + 1e-9);
  EXPECT_TRUE(t1.contradiction);

  ColorFamilies F2{2,
                   {{box2(0, 0, 0.05, 3), box2(0, 0, 3, 0.05)},
                    {box2(1, 1, 1.05, 3), box2(1, 1, 3, 1.05)},
                    {box2(-2, -2, -1.95, 0), box2(-2, -2, 0, -1.95)},
                    {box2(2, -2, 2.05, 0), box2(0, -2, 3, -1.95), box2(-3, -3, 3, 3)}}};
  auto t2 = diameter_diagnostic_trace(F2, 4000, 5);
  EXPECT_TRUE(t2.samples_covered);
  EXPECT_GE(t2.r0_measure, t2.measure_threshold);
  EXPECT_LT(t2.lambda, 1.0);
  EXPECT_LE(t2.r0_diameter, t2.zone_bound + 1e-9);
  EXPECT_TRUE(t2.contradiction);
  DiameterSelectOptions opt;
  opt.diagnostic = true;
  auto r = colorful_diameter_select(F2, opt);
  EXPECT_EQ(r.outcome, DiameterOutcome::HypothesisViolation);
}
