#include "helly/errors.hpp"
#include "helly/steinitz.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

using namespace helly;

namespace {

Vec v2(double x, double y) {
  Vec v(2);
  v << x, y;
  return v;
}

std::vector<Vec> circle(int n, double R, double phase = 0.0) {
  std::vector<Vec> pts;
  for (int i = 0; i < n; ++i) {
    const double t = phase + 2 * M_PI * i / n;
    pts.push_back(v2(R * std::cos(t), R * std::sin(t)));
  }
  return pts;
}

// Origin inradius of a polygon given by points in convex position, via the
// signed distances to the edges of the angularly sorted cycle.
double polygon_inradius(std::vector<Vec> p) {
  std::sort(p.begin(), p.end(), [](const Vec& a, const Vec& b) { return std::atan2(a(1), a(0)) < std::atan2(b(1), b(0)); });
  double r = 1e300;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const Vec& a = p[i];
    const Vec& b = p[(i + 1) % p.size()];
    const double cross = a(0) * b(1) - a(1) * b(0);
    r = std::min(r, cross / (b - a).norm());
  }
  return std::max(0.0, r);
}

double oracle_best(const std::vector<Vec>& pts, int k) {
  const int n = static_cast<int>(pts.size());
  double best = 0.0;
  for (int mask = 0; mask < (1 << n); ++mask) {
    if (__builtin_popcount(mask) != std::min(k, n)) continue;
    std::vector<Vec> s;
    for (int i = 0; i < n; ++i)
      if (mask >> i & 1) s.push_back(pts[i]);
    best = std::max(best, polygon_inradius(s));
  }
  return best;
}

}  // namespace

TEST(Verify, Examples) {
  auto c = verify_sparsification(VPolytope({v2(1, 0), v2(-1, 0), v2(0, 1), v2(0, -1)}), 2);
  EXPECT_NEAR(c.inradius, 1 / std::sqrt(2.0), 1e-12);
  EXPECT_TRUE(c.pass);
  auto b = verify_sparsification(VPolytope({v2(1, 0), v2(0, 1), v2(-1, 0)}), 2);
  EXPECT_EQ(b.inradius, 0.0);
  EXPECT_FALSE(b.pass);
}

TEST(Sparsify, SquareKeepsAllVertices) {
  VPolytope Q({v2(1, 1), v2(-1, 1), v2(-1, -1), v2(1, -1)});
  auto r = sparsify(Q);
  EXPECT_EQ(r.indices.size(), 4u);
  EXPECT_NEAR(r.inradius, 1.0, 1e-12);
}

TEST(Sparsify, HexagonAgainstExhaustiveOracle) {
  auto pts = circle(6, 2 / std::sqrt(3.0));
  auto r = sparsify(VPolytope(pts));
  EXPECT_LE(r.indices.size(), 4u);
  EXPECT_NEAR(r.inradius, oracle_best(pts, 4), 1e-12);
  EXPECT_GE(r.inradius, 1.0 / 24);
}

TEST(Sparsify, TwelvePointsOnCircle) {
  auto pts = circle(12, 1.05, 0.1);
  auto r = sparsify(VPolytope(pts));
  EXPECT_NEAR(r.inradius, oracle_best(pts, 4), 1e-12);
  EXPECT_GE(r.inradius, 1.0 / 24);
}

TEST(Sparsify, RandomPolygonsPassAndGreedyTracksExhaustive) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> T(0, 2 * M_PI), R(1.0, 2.0);
  std::uniform_int_distribution<int> N(4, 10);
  int trials = 0;
  while (trials < 200) {
    std::vector<Vec> pts;
    const int n = N(rng);
    for (int i = 0; i < n; ++i) {
      const double t = T(rng), r = R(rng);
      pts.push_back(v2(r * std::cos(t), r * std::sin(t)));
    }
    VPolytope Q(pts);
    auto in = inball_radius_centered(Q);
    if (!in.origin_inside || in.radius < 1.0) continue;
    ++trials;
    auto r = sparsify(Q);
    EXPECT_LE(r.indices.size(), 4u);
    EXPECT_TRUE(verify_sparsification(VPolytope([&] {
                                        std::vector<Vec> s;
                                        for (int i : r.indices) s.push_back(Q[static_cast<std::size_t>(i)]);
                                        return s;
                                      }()),
                                      2)
                    .pass);
    auto g = greedy_swap_subset(Q, 4);
    EXPECT_GE(g.inradius, 0.9 * r.inradius);
  }
}

TEST(Sparsify, CubeInThreeDimensions) {
  std::vector<Vec> pts;
  for (int m = 0; m < 8; ++m) {
    Vec v(3);
    for (int k = 0; k < 3; ++k) v(k) = (m >> k & 1) ? 1.0 : -1.0;
    pts.push_back(v);
  }
  auto r = sparsify(VPolytope(pts));
  EXPECT_LE(r.indices.size(), 6u);
  EXPECT_GE(r.inradius, 1.0 / 54);
}

TEST(Sparsify, LargeInputsUseGreedy) {
  auto pts = circle(20, 1.1);
  EXPECT_THROW(best_subset_exhaustive(VPolytope(pts), 4), PreconditionError);
  auto r = sparsify(VPolytope(pts));
  EXPECT_FALSE(r.exhaustive);
  EXPECT_LE(r.indices.size(), 4u);
  EXPECT_GE(r.inradius, 1.0 / 24);
}

TEST(Sparsify, PreconditionNamesDirection) {
  try {
    sparsify(VPolytope(circle(6, 0.9)));
    FAIL();
  } catch (const PreconditionError& e) {
    EXPECT_NE(std::string(e.what()).find("direction"), std::string::npos);
  }
}
