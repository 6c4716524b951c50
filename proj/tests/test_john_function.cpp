#include "helly/ellipsoid.hpp"
#include "helly/errors.hpp"
#include "helly/john_function.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace helly;

namespace {

Vec v1(double x) { return Vec::Constant(1, x); }
Vec v2(double x, double y) {
  Vec v(2);
  v << x, y;
  return v;
}

// Dense polar grid of the open unit ball.
std::vector<Vec> open_ball_grid(int d, int n) {
  std::vector<Vec> pts;
  if (d == 1) {
    for (int i = 1; i < n; ++i) pts.push_back(v1(-1.0 + 2.0 * i / n));
    return pts;
  }
  pts.push_back(Vec::Zero(2));
  for (int k = 1; k < n; ++k)
    for (int j = 0; j < 4 * n; ++j) {
      const double r = static_cast<double>(k) / n, t = 2 * M_PI * j / (4 * n);
      pts.push_back(v2(r * std::cos(t), r * std::sin(t)));
    }
  return pts;
}

double grid_height(const LogConcaveFn& f, const Mat& L, const Vec& c, int n) {
  double m = 1e300;
  for (const auto& y : open_ball_grid(static_cast<int>(c.size()), n)) m = std::min(m, f(L * y + c) / h_ball(y));
  return m;
}

LogConcaveFn random_fn(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> N(0, 1);
  std::uniform_real_distribution<double> U(0.5, 2.0);
  std::vector<LogConcaveFn> parts;
  std::vector<Vec> slopes;
  std::vector<double> ints;
  for (int k = 0; k < 2; ++k) {
    Vec s(d);
    for (int i = 0; i < d; ++i) s(i) = 0.7 * N(rng);
    slopes.push_back(s);
    ints.push_back(0.3 * N(rng));
  }
  parts.push_back(PolyLogLinear{slopes, ints, HPolytope::cube(d, 2.0 + U(rng))});
  Mat A = Mat::Identity(d, d) * 0.6;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) A(i, j) += 0.15 * N(rng);
  Vec c(d);
  for (int i = 0; i < d; ++i) c(i) = 0.3 * N(rng);
  parts.push_back(EllipsoidalFunction(U(rng), A, c));
  parts.push_back(ConstClamp{d, U(rng)});
  return pointwise_min(parts);
}

}  // namespace

TEST(TrustRegion, AgainstDiskGrid) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> N(0, 1);
  auto grid = open_ball_grid(2, 300);
  for (int t = 0; t < 20; ++t) grid.push_back(v2(std::cos(t * 0.1), std::sin(t * 0.1)));
  for (int trial = 0; trial < 30; ++trial) {
    Mat H(2, 2);
    H << N(rng), N(rng), 0, N(rng);
    H(1, 0) = H(0, 1);
    Vec g = v2(N(rng), N(rng)) * (trial % 3 == 0 ? 0.0 : 1.0);
    auto r = trust_region_min(H, g, 0.3);
    double m = 1e300;
    for (const auto& y : grid) m = std::min(m, y.dot(H * y) + 2 * g.dot(y) + 0.3);
    for (int j = 0; j < 2000; ++j) {
      Vec y = v2(std::cos(2 * M_PI * j / 2000), std::sin(2 * M_PI * j / 2000));
      m = std::min(m, y.dot(H * y) + 2 * g.dot(y) + 0.3);
    }
    EXPECT_LE(r.y.norm(), 1 + 1e-12);
    EXPECT_LE(r.value, m + 1e-12);
    EXPECT_GE(r.value, m - 1e-4);
  }
}

TEST(MaxHeight, AgainstGridRatio) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> N(0, 1);
  for (int d = 1; d <= 2; ++d)
    for (int trial = 0; trial < 10; ++trial) {
      auto f = random_fn(d, rng);
      Mat L = Mat::Identity(d, d) * 0.3;
      Vec c = Vec::Zero(d);
      const double v = max_feasible_log_height(f, L, c);
      ASSERT_TRUE(std::isfinite(v));
      const double m = grid_height(f, L, c, d == 1 ? 20000 : 200);
      EXPECT_LE(std::exp(v), m * (1 + 1e-9));
      EXPECT_GE(std::exp(v), m * (1 - 1e-3));
    }
}

TEST(MaxHeight, SupportMustFit) {
  auto f = constant_on(HPolytope::box(v1(-1), v1(1)));
  EXPECT_NEAR(max_feasible_log_height(f, Mat::Identity(1, 1), v1(0)), 0.0, 1e-15);
  EXPECT_EQ(max_feasible_log_height(f, Mat::Identity(1, 1) * 1.01, v1(0)), -std::numeric_limits<double>::infinity());
  auto h = LogConcaveFn(EllipsoidalFunction::standard(2));
  EXPECT_NEAR(max_feasible_log_height(h, Mat::Identity(2, 2), Vec::Zero(2)), 0.0, 1e-12);
  EXPECT_NEAR(max_feasible_log_height(h, Mat::Identity(2, 2) * 0.5, Vec::Zero(2)), 0.0, 1e-12);
}

TEST(JohnFunction, HeightFunctionIsItsOwn) {
  for (int d = 1; d <= 2; ++d) {
    auto r = john_function(LogConcaveFn(EllipsoidalFunction::standard(d)));
    EXPECT_NEAR(r.g.alpha, 1.0, 1e-5);
    EXPECT_NEAR(r.g.integral(), h_integral(d), 1e-5 * h_integral(d));
    EXPECT_NEAR(r.g.c.norm(), 0.0, 1e-4);
    EXPECT_TRUE(r.certified) << r.residual();
  }
}

TEST(JohnFunction, IndicatorOfInterval) {
  auto f = constant_on(HPolytope::box(v1(-1), v1(1)));
  auto r = john_function(f);
  EXPECT_TRUE(r.certified);
  // Brute force over (height, half-length, center) with g <= f.
  double best = 0.0;
  for (int i = 1; i <= 100; ++i)
    for (int j = 1; j <= 100; ++j)
      for (int k = -20; k <= 20; ++k) {
        const double a = i / 100.0, l = j / 100.0, c = k / 20.0;
        if (std::abs(c) + l <= 1.0 && a <= 1.0) best = std::max(best, a * l * M_PI / 2);
      }
  EXPECT_NEAR(r.g.integral(), best, 1e-3);
  EXPECT_NEAR(integral_ratio(f, r.g), 4 / M_PI, 1e-4);
  EXPECT_GE(integral_ratio(f, r.g), 1.0);
}

TEST(JohnFunction, ClampedTallBump) {
  auto f = pointwise_min({LogConcaveFn(EllipsoidalFunction(2.0, Mat::Identity(1, 1), v1(0))),
                          LogConcaveFn(ConstClamp{1, 1.0})});
  auto r = john_function(f);
  EXPECT_TRUE(r.certified) << r.residual();
  EXPECT_LE(max_excess(LogConcaveFn(r.g), f, Box{v1(-1.5), v1(1.5)}, 100000), 1e-7);
  // Grid over (height, half-length) centered at 0, domination checked on a grid.
  double best = 0.0;
  std::vector<double> xs;
  for (int i = 0; i <= 400; ++i) xs.push_back(-1 + i / 200.0);
  for (int i = 1; i <= 200; ++i)
    for (int j = 1; j <= 200; ++j) {
      const double a = i / 200.0, l = j / 200.0;
      bool ok = true;
      for (double x : xs)
        if (a * h_ball(v1(x / l)) > f(v1(x)) + 1e-12) {
          ok = false;
          break;
        }
      if (ok) best = std::max(best, a * l * M_PI / 2);
    }
  EXPECT_GE(r.g.integral(), best - 1e-3);
}

TEST(JohnFunction, IndicatorOfPolygonMatchesJohnEllipsoid) {
  std::vector<HPolytope> bodies{HPolytope::cube(2, 1.0), HPolytope::regular_polygon(3, 1.0, 0.3),
                                HPolytope::box(v2(-1, 0), v2(3, 1))};
  for (const auto& P : bodies) {
    auto r = john_function(constant_on(P));
    auto E = john_ellipsoid(P);
    const double expect = E.ellipsoid.volume() / unit_ball_volume(2) * h_integral(2);
    EXPECT_NEAR(r.g.integral() / expect, 1.0, 1e-4);
    EXPECT_TRUE(r.certified) << r.residual();
  }
}

TEST(JohnFunction, RandomInstancesAreDominatedAndCertified) {
  std::mt19937_64 rng(17);
  int certified = 0, total = 0;
  for (int d = 1; d <= 2; ++d)
    for (int trial = 0; trial < (d == 1 ? 10 : 4); ++trial) {
      auto f = random_fn(d, rng);
      auto r = john_function(f);
      Box b = r.g.bounding_box();
      EXPECT_LE(max_excess(LogConcaveFn(r.g), f, b, 100000), 1e-7);
      EXPECT_TRUE(r.certified) << "d=" << d << " trial " << trial << " residual " << r.residual();
      EXPECT_GE(integral_ratio(f, r.g), 1.0 - 1e-9);
      certified += r.certified;
      ++total;
      if (r.certified) {
        EXPECT_LE(r.residual(), 1e-3);
        Vec s = Vec::Zero(d);
        for (std::size_t i = 0; i < r.contacts.size(); ++i) s += r.weights(static_cast<int>(i)) * r.contacts[i];
        EXPECT_LE(s.norm(), 1e-3);
      }
    }
  EXPECT_EQ(certified, total);
}

TEST(Translate, Examples) {
  auto h = LogConcaveFn(EllipsoidalFunction::standard(1));
  EllipsoidalFunction half(0.5, Mat::Identity(1, 1), v1(0));
  Box search{v1(-2), v1(2)};
  auto a = find_translate_below(h, half, search);
  ASSERT_TRUE(a.has_value());
  EXPECT_GE(translate_margin(h, half, v1(0)), 0.0);
  EllipsoidalFunction tall(1.5, Mat::Identity(1, 1) * 4, v1(0));
  EXPECT_FALSE(find_translate_below(h, tall, search).has_value());
}

TEST(Translate, FeasibleSetIsConvex) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> U(-2, 2), L(0, 1);
  for (int trial = 0; trial < 10; ++trial) {
    auto f = random_fn(2, rng);
    EllipsoidalFunction g(0.05, Mat::Identity(2, 2) * 6, Vec::Zero(2));
    std::vector<Vec> feasible;
    for (int k = 0; k < 400 && feasible.size() < 6; ++k) {
      Vec a = v2(U(rng), U(rng));
      if (translate_margin(f, g, a) >= 0.0) feasible.push_back(a);
    }
    for (std::size_t i = 0; i < feasible.size(); ++i)
      for (std::size_t j = i + 1; j < feasible.size(); ++j) {
        const double t = L(rng);
        Vec m = t * feasible[i] + (1 - t) * feasible[j];
        EXPECT_GE(translate_margin(f, g, m), -1e-12);
        EllipsoidalFunction gm = g.translated(m);
        EXPECT_LE(max_excess(LogConcaveFn(gm), f, gm.bounding_box(), 2500), 1e-9);
      }
  }
}
