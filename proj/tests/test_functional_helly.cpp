#include "helly/errors.hpp"
#include "helly/functional_helly.hpp"

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

// min(exp(-max of affine pieces) on [a, b], level), with [a, b] declared.
LogConcaveFn random_fn_1d(std::mt19937_64& rng) {
  std::normal_distribution<double> N(0, 1);
  std::uniform_real_distribution<double> L(-3.0, -0.5), R(0.5, 3.0), C(0.5, 2.0);
  const double a = L(rng), b = R(rng);
  std::vector<Vec> slopes;
  std::vector<double> ints;
  const int pieces = 1 + static_cast<int>(rng() % 2);
  for (int k = 0; k < pieces; ++k) {
    slopes.push_back(v1(N(rng)));
    ints.push_back(0.5 * N(rng));
  }
  LogConcaveFn p = PolyLogLinear{slopes, ints, HPolytope::box(v1(a), v1(b))};
  return pointwise_min({p, ConstClamp{1, C(rng)}}).with_box(v1(a), v1(b));
}

}  // namespace

TEST(Normalize, AlreadyInJohnPosition) {
  for (int d = 1; d <= 2; ++d) {
    auto f = constant_on(HPolytope::cube(d, 1.0));
    auto nf = normalize_to_john_position({f, LogConcaveFn(ConstClamp{d, 1.0})});
    EXPECT_NEAR(nf.transform.alpha, 1.0, 1e-6);
    EXPECT_LE((nf.transform.A - Mat::Identity(d, d)).norm(), 1e-6);
    EXPECT_LE(nf.transform.c.norm(), 1e-6);
  }
}

TEST(Normalize, HeightFunctionIsIdentity) {
  auto nf = normalize_to_john_position({LogConcaveFn(EllipsoidalFunction::standard(2))});
  EXPECT_NEAR(nf.transform.alpha, 1.0, 1e-5);
  EXPECT_LE((nf.transform.A - Mat::Identity(2, 2)).norm(), 1e-4);
}

TEST(Normalize, RecoversPosition) {
  for (int d = 1; d <= 2; ++d) {
    auto f0 = constant_on(HPolytope::cube(d, 1.0));
    Vec e1 = Vec::Zero(d);
    e1(0) = 1.0;
    // x -> 3 f0(2 (x - e1)), whose John function is 3 h(2 (x - e1)).
    auto f = pullback(f0, 3.0, 2.0 * Mat::Identity(d, d), -2.0 * e1);
    auto nf = normalize_to_john_position({f});
    EXPECT_NEAR(nf.transform.alpha, 3.0, 1e-4);
    EXPECT_LE((nf.transform.A - 2.0 * Mat::Identity(d, d)).norm(), 1e-4);
    EXPECT_LE((nf.transform.c - e1).norm(), 1e-4);
    // Round trip of points and integrals.
    Vec x = Vec::Constant(d, 0.7);
    EXPECT_LE((nf.transform.to_original(nf.transform.to_normalized(x)) - x).norm(), 1e-12);
    const double orig = integrate(f).value;
    EXPECT_NEAR(nf.transform.unmap_integral(integrate(nf.fs[0]).value), orig, 1e-5 * orig);
  }
}

TEST(Normalize, NormalizedMinimumHasHeightFunctionAsJohn) {
  std::mt19937_64 rng(5);
  std::vector<LogConcaveFn> fs;
  for (int i = 0; i < 3; ++i) fs.push_back(random_fn_1d(rng));
  auto nf = normalize_to_john_position(fs);
  auto again = john_function(pointwise_min(nf.fs));
  EXPECT_NEAR(again.g.alpha, 1.0, 1e-4);
  EXPECT_NEAR(std::abs(again.g.A(0, 0)), 1.0, 1e-4);
  EXPECT_NEAR(again.g.c(0), 0.0, 1e-4);
}

TEST(LiftContacts, Examples) {
  auto nf = normalize_to_john_position({LogConcaveFn(EllipsoidalFunction::standard(2))});
  EXPECT_GE(lift_contact_polytope(nf.john.contacts).inradius, 1.0 / 3 - 1e-6);
  EXPECT_NEAR(lift_contact_polytope({v1(-0.5), v1(0.5)}).inradius, 0.5, 1e-12);
  EXPECT_NEAR(lift_contact_polytope({v1(-0.8), v1(0.6), v1(0.1)}).inradius, 0.6, 1e-12);
  EXPECT_THROW(lift_contact_polytope({v1(-0.4), v1(0.4)}), UncertifiedError);
  EXPECT_THROW(lift_contact_polytope({v2(0.9, 0), v2(-0.9, 0), v2(0, 0.1), v2(0, -0.1)}), UncertifiedError);
}

TEST(RatioBound, ClosedForm) {
  // d = 1: (24e + 24e^52) * 4.
  const double expect1 = std::log(24.0) + 52.0 + std::log1p(std::exp(1.0 - 52.0)) + std::log(4.0);
  EXPECT_NEAR(fqh_ratio_bound(1, 4.0).log_value(), expect1, 1e-12);
  // d = 2: [4e 144 2^8 + 2 e^{1664} 144 2^6] 16 * 2.
  const double big = std::log(2.0 * 144.0 * 64.0) + 1664.0;
  const double small = std::log(4.0 * 144.0 * 256.0) + 1.0;
  EXPECT_NEAR(fqh_ratio_bound(2, 4.0).log_value(), big + std::log1p(std::exp(small - big)) + std::log(32.0), 1e-9);
}

TEST(Select, SingleFunction) {
  auto cert = select_subset({constant_on(HPolytope::cube(1, 2.0))});
  EXPECT_EQ(cert.sigma, std::vector<int>{0});
  EXPECT_DOUBLE_EQ(cert.measured_ratio, 1.0);
}

TEST(Select, IdenticalFunctions) {
  std::mt19937_64 rng(2);
  auto f = random_fn_1d(rng);
  auto cert = select_subset({f, f, f, f});
  EXPECT_GE(cert.sigma.size(), 1u);
  EXPECT_LE(cert.sigma.size(), 3u);
  EXPECT_NEAR(cert.measured_ratio, 1.0, 1e-9);
}

TEST(Select, RandomOneDimensionalAgainstExhaustiveOracle) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 8; ++trial) {
    std::vector<LogConcaveFn> fs;
    for (int i = 0; i < 5; ++i) fs.push_back(random_fn_1d(rng));
    auto cert = select_subset(fs);
    EXPECT_TRUE(cert.certified) << "trial " << trial;
    EXPECT_LE(cert.sigma.size(), 3u);
    for (int i : cert.sigma) {
      EXPECT_GE(i, 0);
      EXPECT_LT(i, 5);
    }
    EXPECT_TRUE(std::isfinite(cert.measured_ratio));
    EXPECT_GE(cert.measured_ratio, 1.0 - 1e-9);
    EXPECT_LE(std::log(cert.measured_ratio), cert.ratio_bound.log_value());
    EXPECT_GE(cert.p_inradius, 1.0 / 12 - 1e-6);
    EXPECT_GE(cert.q_inradius, 0.5 - 1e-6);
    auto best = exhaustive_subset_ratio(fs, 3);
    EXPECT_GE(cert.measured_ratio, best.ratio - 1e-7);
    EXPECT_LE(std::log(best.ratio), cert.ratio_bound.log_value());
    // Pointwise, the selected minimum dominates the full minimum.
    std::vector<LogConcaveFn> picked;
    for (int i : cert.sigma) picked.push_back(fs[static_cast<std::size_t>(i)]);
    auto ms = pointwise_min(picked), mall = pointwise_min(fs);
    for (int k = 0; k <= 600; ++k) {
      const Vec x = v1(-3.0 + k / 100.0);
      EXPECT_GE(ms(x), mall(x));
    }
    // Round trip of integrals through the position transform.
    auto nf = normalize_to_john_position(fs);
    for (std::size_t i = 0; i < fs.size(); ++i) {
      const double orig = integrate(fs[i]).value;
      EXPECT_NEAR(nf.transform.unmap_integral(integrate(nf.fs[i]).value), orig, 1e-5 * orig);
    }
  }
}

TEST(Select, TwoDimensionalPolygons) {
  std::vector<LogConcaveFn> fs;
  for (int k = 0; k < 6; ++k) {
    const double t = 2 * M_PI * k / 6;
    Mat A(1, 2);
    A << std::cos(t), std::sin(t);
    fs.push_back(constant_on(HPolytope(A, Vec::Constant(1, 1.0))).with_box(v2(-3, -3), v2(3, 3)));
  }
  fs.push_back(constant_on(HPolytope::cube(2, 3.0)));
  auto cert = select_subset(fs);
  EXPECT_LE(cert.sigma.size(), 5u);
  EXPECT_GE(cert.measured_ratio, 1.0 - 1e-9);
  EXPECT_LE(std::log(cert.measured_ratio), cert.ratio_bound.log_value());
}

TEST(ExhaustiveOracle, RefusesLargeFamilies) {
  std::vector<LogConcaveFn> fs(13, constant_on(HPolytope::cube(1, 1.0)));
  EXPECT_THROW(exhaustive_subset_ratio(fs, 3), PreconditionError);
}

TEST(ExhaustiveOracle, SmallCase) {
  // Intervals [-1, 1], [0, 2], [-2, 0.5].
  std::vector<LogConcaveFn> fs{constant_on(HPolytope::box(v1(-1), v1(1))), constant_on(HPolytope::box(v1(0), v1(2))),
                               constant_on(HPolytope::box(v1(-2), v1(0.5)))};
  auto r = exhaustive_subset_ratio(fs, 2);
  // Full intersection is [0, 0.5]; the pairs give lengths 1, 1.5, 0.5.
  EXPECT_EQ(r.subset, (std::vector<int>{1, 2}));
  EXPECT_NEAR(r.ratio, 1.0, 1e-9);
}
