#include "helly/errors.hpp"
#include "helly/lp.hpp"
#include "helly/polytope.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace helly;

namespace {

Vec v2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

// Brute force at d=2: best objective over all pairwise constraint crossings.
double brute_max(const Vec& c, const Mat& A, const Vec& b, bool& any) {
  any = false;
  double best = -1e300;
  for (int i = 0; i < A.rows(); ++i)
    for (int j = i + 1; j < A.rows(); ++j) {
      Eigen::Matrix2d S;
      S << A(i, 0), A(i, 1), A(j, 0), A(j, 1);
      if (std::abs(S.determinant()) < 1e-12) continue;
      Eigen::Vector2d x = S.fullPivLu().solve(Eigen::Vector2d(b(i), b(j)));
      if (((A * Vec(x)) - b).maxCoeff() > 1e-9) continue;
      any = true;
      best = std::max(best, c.dot(Vec(x)));
    }
  return best;
}

}  // namespace

TEST(Lp, BoxSupport) {
  auto r = solve_lp(v2(1, 0), HPolytope::cube(2));
  ASSERT_TRUE(r.optimal());
  EXPECT_NEAR(r.value, 1.0, 1e-12);
  EXPECT_NEAR(r.x(0), 1.0, 1e-12);
}

TEST(Lp, SimplexFace) {
  Mat A(3, 2);
  A << -1, 0, 0, -1, 1, 1;
  Vec b(3);
  b << 0, 0, 1;
  auto r = solve_lp(v2(1, 1), A, b);
  ASSERT_TRUE(r.optimal());
  EXPECT_NEAR(r.value, 1.0, 1e-12);
  EXPECT_LE((A * r.x - b).maxCoeff(), 1e-9);
}

TEST(Lp, ContradictoryHalfspacesInfeasible) {
  Mat A(2, 1);
  A << -1, 1;
  Vec b(2);
  b << -1, 0;
  EXPECT_EQ(solve_lp(Vec::Ones(1), A, b).status, LpStatus::Infeasible);
}

TEST(Lp, UnboundedDetected) {
  Mat A(1, 2);
  A << 1, 0;
  Vec b(1);
  b << 1;
  EXPECT_EQ(solve_lp(v2(0, 1), A, b).status, LpStatus::Unbounded);
  EXPECT_EQ(solve_lp(v2(1, 0), A, b).status, LpStatus::Optimal);
}

TEST(Lp, NoConstraints) {
  Mat A(0, 2);
  Vec b(0);
  EXPECT_EQ(solve_lp(v2(0, 0), A, b).status, LpStatus::Optimal);
  EXPECT_EQ(solve_lp(v2(1, 0), A, b).status, LpStatus::Unbounded);
}

TEST(Lp, ZeroObjectiveFeasibilityProbe) {
  Mat A(2, 1);
  A << 1, -1;
  Vec b(2);
  b << 2, -1;
  auto r = solve_lp(Vec::Zero(1), A, b);
  ASSERT_TRUE(r.optimal());
  EXPECT_GE(r.x(0), 1.0 - 1e-9);
  EXPECT_LE(r.x(0), 2.0 + 1e-9);
}

TEST(Lp, DegenerateVertexManyTightRows) {
  // Many constraints through the same optimal vertex.
  const int k = 12;
  Mat A(k, 2);
  Vec b(k);
  for (int i = 0; i < k; ++i) {
    double t = -0.5 + i / double(k - 1);
    A(i, 0) = std::cos(t);
    A(i, 1) = std::sin(t);
    b(i) = std::cos(t);  // all pass through (1,0)
  }
  auto r = solve_lp(v2(1, 0), A, b);
  ASSERT_TRUE(r.optimal());
  EXPECT_NEAR(r.value, 1.0, 1e-9);
}

TEST(Lp, MatchesBruteForceOnRandomPolygons) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> U(0.2, 2.0);
  for (int trial = 0; trial < 300; ++trial) {
    int m = 3 + trial % 10;
    Mat A(m, 2);
    Vec b(m);
    for (int i = 0; i < m; ++i) {
      A(i, 0) = g(rng);
      A(i, 1) = g(rng);
      b(i) = (trial % 3 == 0) ? g(rng) : U(rng);
    }
    Vec c = v2(g(rng), g(rng));
    auto r = solve_lp(c, A, b);
    bool any = false;
    double bm = brute_max(c, A, b, any);
    if (r.status == LpStatus::Optimal) {
      ASSERT_LE((A * r.x - b).maxCoeff(), 1e-9 * std::max(1.0, b.cwiseAbs().maxCoeff()));
      ASSERT_TRUE(any);
      ASSERT_NEAR(r.value, bm, 1e-9 * std::max(1.0, std::abs(bm)));
    } else if (r.status == LpStatus::Infeasible) {
      ASSERT_FALSE(any);
    } else {
      // Unbounded: a feasible point must exist and the objective grows along
      // a recession direction; the vertex optimum cannot be the answer.
      auto feas = solve_lp(Vec::Zero(2), A, b);
      ASSERT_TRUE(feas.optimal());
    }
  }
}

TEST(Lp, DeterministicForFixedInput) {
  Mat A(4, 2);
  A << 1, 0, -1, 0, 0, 1, 0, -1;
  Vec b = Vec::Ones(4);
  auto r1 = solve_lp(v2(1, 1), A, b);
  auto r2 = solve_lp(v2(1, 1), A, b);
  EXPECT_EQ(r1.x, r2.x);
}
