#include "helly/sphere.hpp"
#include "helly/zones.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace helly;

namespace {

Vec v2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

HPolytope slab_box() {
  Mat A(2, 2);
  A << 1, 0, -1, 0;
  return intersect({HPolytope(A, Vec::Constant(2, 0.1)), HPolytope::cube(2, 5.0)});
}

double monte_carlo_zone_measure(const Zone& z, int N, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  int in = 0;
  for (int i = 0; i < N; ++i) in += std::abs(random_unit(static_cast<int>(z.axis.size()), rng).dot(z.axis)) <= z.half_width;
  return double(in) / N;
}

WitnessSample symmetric(const std::vector<Vec>& us) {
  WitnessSample S;
  for (auto& u : us) {
    S.directions.push_back(u);
    S.directions.push_back(-u);
  }
  return S;
}

double hull_inradius(const WitnessSample& S) {
  std::vector<Vec> pts = S.directions;
  return inball_radius_centered(VPolytope(pts)).radius;
}

}  // namespace

TEST(Membership, Examples) {
  auto ball = HPolytope::regular_polygon(64, 1.0);
  EXPECT_TRUE(witness_membership(ball, v2(0.6, 0.8), 2.01));
  EXPECT_TRUE(witness_membership(slab_box(), v2(1, 0), 0.5));
  EXPECT_FALSE(witness_membership(slab_box(), v2(0, 1), 0.5));
}

TEST(Sample, ThinSlabMembersReverified) {
  auto K = slab_box();
  auto S = sample_witness_set(K, 0.5, 10000, 1);
  ASSERT_FALSE(S.directions.empty());
  for (auto& u : S.directions) {
    EXPECT_LE(width(K, u), 0.5 + 1e-9);
    // width = 0.2|u1| + 10|u2| <= 0.5 forces |u2| <= 0.05
    EXPECT_LE(std::abs(u(1)), 0.05 + 1e-12);
  }
}

TEST(Sample, BallThresholds) {
  // 64-gon inscribed in the unit circle: every width is at most 2.
  auto ball = HPolytope::regular_polygon(64, std::cos(M_PI / 64));
  EXPECT_TRUE(sample_witness_set(ball, 1.0, 500, 2).directions.empty());
  auto S = sample_witness_set(ball, 2.0 + 1e-6, 500, 2);
  EXPECT_EQ(S.directions.size(), 1000u);
}

TEST(Sample, DeterministicPerSeed) {
  auto K = slab_box();
  auto a = sample_witness_set(K, 0.5, 2000, 9), b = sample_witness_set(K, 0.5, 2000, 9);
  ASSERT_EQ(a.directions.size(), b.directions.size());
  for (std::size_t i = 0; i < a.directions.size(); ++i) EXPECT_EQ(a.directions[i], b.directions[i]);
}

TEST(ZoneMeasure, Examples) {
  EXPECT_EQ(zone_measure_bound({v2(1, 0), 0.0}), 0.0);
  EXPECT_EQ(zone_measure_bound({v2(1, 0), 1.0}), 1.0);
  Zone z{v2(0, 1), 0.3};
  double mc = monte_carlo_zone_measure(z, 200000, 3);
  EXPECT_NEAR(mc, 2 / M_PI * std::asin(0.3), 5e-3);
  EXPECT_LE(mc, zone_measure_bound(z));
}

TEST(ZoneMeasure, DominatesMonteCarlo) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> U(0, 1);
  for (int d = 2; d <= 3; ++d)
    for (int i = 0; i < 100; ++i) {
      Zone z{random_unit(d, rng), U(rng)};
      EXPECT_LE(monte_carlo_zone_measure(z, 4000, 100 + i), zone_measure_bound(z) + 0.02);
    }
}

TEST(CoveringZone, Examples) {
  auto z1 = min_covering_zone(symmetric({v2(1, 0)}));
  EXPECT_NEAR(z1.half_width, 0.0, 1e-12);
  EXPECT_NEAR(std::abs(z1.axis(1)), 1.0, 1e-12);
  auto z2 = min_covering_zone(symmetric({v2(1, 0), v2(0, 1)}));
  EXPECT_NEAR(z2.half_width, 1 / std::sqrt(2.0), 1e-9);
  EXPECT_NEAR(std::abs(z2.axis(0)), std::abs(z2.axis(1)), 1e-9);
  WitnessSample full;
  full.directions = sphere_grid(3, 2000);
  EXPECT_GT(min_covering_zone(full).half_width, 0.97);
}

TEST(CoveringZone, EqualsSymmetricHullInradius) {
  std::mt19937_64 rng(7);
  for (int d = 2; d <= 3; ++d)
    for (int t = 0; t < 25; ++t) {
      std::vector<Vec> us;
      for (int i = 0; i < 4 + t % 6; ++i) us.push_back(random_unit(d, rng));
      auto S = symmetric(us);
      double omega = min_covering_zone(S).half_width;
      EXPECT_NEAR(omega, hull_inradius(S), 1e-5);
      EXPECT_TRUE(symmetric_hull_contains_ball(S, omega - 1e-6));
      EXPECT_FALSE(symmetric_hull_contains_ball(S, omega + 1e-4));
    }
}

TEST(HullBall, Examples) {
  auto S = symmetric({v2(1, 0), v2(0, 1)});
  EXPECT_TRUE(symmetric_hull_contains_ball(S, 1 / std::sqrt(2.0)));
  EXPECT_FALSE(symmetric_hull_contains_ball(S, 0.71));
  EXPECT_FALSE(symmetric_hull_contains_ball(symmetric({v2(1, 0)}), 0.1));
}

TEST(HullBall, LargeSampleUsesDirectionChecks) {
  std::mt19937_64 rng(8);
  std::vector<Vec> us;
  for (int i = 0; i < 200; ++i) us.push_back(random_unit(2, rng));
  auto S = symmetric(us);
  double omega = min_covering_zone(S).half_width;
  EXPECT_TRUE(symmetric_hull_contains_ball(S, omega - 1e-6));
  EXPECT_FALSE(symmetric_hull_contains_ball(S, omega + 1e-4));
}

TEST(DiameterCertificate, SoundOnRandomBodies) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> U(0.3, 2.0);
  for (int t = 0; t < 30; ++t) {
    Mat A(6, 2);
    Vec b(6);
    for (int i = 0; i < 6; ++i) {
      A.row(i) = random_unit(2, rng).transpose();
      b(i) = U(rng);
    }
    auto K = intersect({HPolytope(A, b), HPolytope::cube(2, 3.0)});
    double lambda = 1.5 * U(rng);
    auto S = sample_witness_set(K, lambda, 3000, 100 + t);
    auto c = diameter_certificate(K, lambda, S);
    if (c.issued) EXPECT_GE(c.bound, diameter(K).value - 1e-9);
  }
}

TEST(DiameterCertificate, TightBallCase) {
  auto K = HPolytope::regular_polygon(64, std::cos(M_PI / 64));
  double lambda = 2 + 1e-6;
  auto S = sample_witness_set(K, lambda, 4000, 4);
  auto c = diameter_certificate(K, lambda, S);
  ASSERT_TRUE(c.issued);
  EXPECT_GE(c.bound, diameter(K).value - 1e-9);
  EXPECT_LT(std::abs(c.bound - 2) / 2, 0.05);
}

TEST(DiameterCertificate, SlabGivesLargeButSoundBound) {
  auto K = slab_box();
  auto S = sample_witness_set(K, 0.5, 10000, 1);
  auto c = diameter_certificate(K, 0.5, S);
  ASSERT_TRUE(c.issued);
  EXPECT_LT(c.zone.half_width, 0.1);
  EXPECT_GE(c.bound, diameter(K).value);
}

TEST(DiameterCertificate, NoCertificateWhenZoneDegenerate) {
  auto c = diameter_certificate(slab_box(), 0.5, symmetric({v2(1, 0)}));
  EXPECT_FALSE(c.issued);
}

TEST(CapBounds, ValuesAndRanges) {
  EXPECT_NEAR(cap_diameter_bound(M_PI / 6), 2.0, 1e-12);
  EXPECT_NEAR(cap_width_bound(M_PI / 3), 2.0, 1e-12);
  EXPECT_THROW(cap_diameter_bound(M_PI / 4), std::invalid_argument);
  EXPECT_THROW(cap_width_bound(0.0), std::invalid_argument);
}

TEST(CapBounds, TruncatedSlabs) {
  // K = [-1/2,1/2] x [-L,L]: width_u = |u1| + 2L|u2|.
  for (double L : {0.2, 0.5, 1.0, 3.0}) {
    Mat A(2, 2);
    A << 1, 0, -1, 0;
    auto K = intersect({HPolytope(A, Vec::Constant(2, 0.5)), HPolytope::box(v2(-5, -L), v2(5, L))});
    // Largest cap about e1 inside A_K^1, measured on a fine angle grid.
    double cap = 0;
    for (int i = 1; i <= 100000; ++i) {
      double a = 0.5 * M_PI * i / 100000;
      if (width(K, v2(std::cos(a), std::sin(a))) > 1 + 1e-12) break;
      cap = a;
    }
    double phi = std::min(cap / 2, M_PI / 4 - 1e-9);
    if (phi <= 0) continue;
    EXPECT_GE(cap_diameter_bound(phi), diameter(K).value - 1e-9);
    // width bound: directions within phi of e1 have width <= 1/cos(phi).
    for (int i = 0; i <= 100; ++i) {
      double a = phi * i / 100;
      EXPECT_LE(width(K, v2(std::cos(a), std::sin(a))), cap_width_bound(phi) + 1e-9);
    }
  }
}
