#include "helly/zones.hpp"

#include "helly/errors.hpp"
#include "helly/sphere.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace helly {

WidthOracle::WidthOracle(const HPolytope& K) : K_(K) {
  if (!K.feasible()) {
    empty_ = true;
    return;
  }
  if (K.dim() <= 3 && bounded(K)) {
    auto V = vertices(K);
    V_ = V.matrix();
    cached_ = true;
  }
}

double WidthOracle::operator()(const Vec& u) const {
  if (empty_) throw InfeasibleError("width of an empty body");
  if (cached_) {
    Vec p = V_.transpose() * u;
    return p.maxCoeff() - p.minCoeff();
  }
  return width(K_, u);
}

bool witness_membership(const HPolytope& K, const Vec& u, double lambda) {
  return width(K, u) <= lambda + kTol;
}

WitnessSample sample_witness_set(const WidthOracle& widths, int d, double lambda, int N, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  WitnessSample S;
  S.lambda = lambda;
  for (int i = 0; i < N; ++i) {
    Vec u = random_unit(d, rng);
    if (widths(u) <= lambda + kTol) {
      S.directions.push_back(u);
      S.directions.push_back(-u);
    }
  }
  return S;
}

WitnessSample sample_witness_set(const HPolytope& K, double lambda, int N, std::uint64_t seed) {
  return sample_witness_set(WidthOracle(K), K.dim(), lambda, N, seed);
}

double zone_measure_bound(const Zone& z) { return z.half_width; }

namespace {

// One representative per +-pair.
Mat half_set(const std::vector<Vec>& dirs) {
  std::vector<Vec> keep;
  for (const auto& u : dirs) {
    Eigen::Index k = 0;
    while (k < u.size() && u(k) == 0.0) ++k;
    if (k == u.size()) continue;
    Vec v = u(k) > 0 ? u : Vec(-u);
    keep.push_back(v);
  }
  std::sort(keep.begin(), keep.end(), [](const Vec& a, const Vec& b) {
    return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
  });
  keep.erase(std::unique(keep.begin(), keep.end(), [](const Vec& a, const Vec& b) { return (a - b).norm() == 0.0; }),
             keep.end());
  return columns(keep);
}

double max_abs_dot(const Mat& U, const Vec& x) { return (U.transpose() * x).cwiseAbs().maxCoeff(); }

// min t s.t. |<u,x>| <= t for u in U, <x0, x> = 1.
Vec tangent_step(const Mat& U, const Vec& x0) {
  const Eigen::Index d = U.rows(), n = U.cols();
  Mat A(2 * n + 2, d + 1);
  Vec b = Vec::Zero(2 * n + 2);
  A.topLeftCorner(n, d) = U.transpose();
  A.block(0, d, n, 1).setConstant(-1.0);
  A.block(n, 0, n, d) = -U.transpose();
  A.block(n, d, n, 1).setConstant(-1.0);
  A.row(2 * n).head(d) = x0.transpose();
  A(2 * n, d) = 0.0;
  b(2 * n) = 1.0;
  A.row(2 * n + 1).head(d) = -x0.transpose();
  A(2 * n + 1, d) = 0.0;
  b(2 * n + 1) = -1.0;
  Vec c = Vec::Zero(d + 1);
  c(d) = -1.0;
  LpResult r = solve_lp(c, A, b);
  if (!r.optimal()) return x0;
  return r.x.head(d);
}

}  // namespace

Zone min_covering_zone(const WitnessSample& S) {
  if (S.directions.empty()) throw std::invalid_argument("min_covering_zone: empty sample");
  const int d = S.dim();
  Zone z;
  if (d == 1) {
    z.axis = Vec::Ones(1);
    z.half_width = 1.0;
    return z;
  }
  Mat U = half_set(S.directions);
  const auto seeds = hemisphere_grid(d, 5000);
  const Eigen::Index ns = static_cast<Eigen::Index>(seeds.size());
  Mat G = columns(seeds);
  Vec F = Vec::Zero(ns);
  const Eigen::Index block = 1024;
  for (Eigen::Index c0 = 0; c0 < U.cols(); c0 += block) {
    const Eigen::Index w = std::min(block, U.cols() - c0);
    Mat P = G.transpose() * U.middleCols(c0, w);
    F = F.cwiseMax(P.cwiseAbs().rowwise().maxCoeff());
  }
  // Refine the best few seeds.
  std::vector<Eigen::Index> order(static_cast<std::size_t>(ns));
  for (Eigen::Index i = 0; i < ns; ++i) order[static_cast<std::size_t>(i)] = i;
  std::partial_sort(order.begin(), order.begin() + std::min<Eigen::Index>(8, ns), order.end(),
                    [&](Eigen::Index a, Eigen::Index b) { return F(a) < F(b) || (F(a) == F(b) && a < b); });
  z.half_width = std::numeric_limits<double>::infinity();
  for (int s = 0; s < std::min<Eigen::Index>(8, ns); ++s) {
    Vec x = seeds[static_cast<std::size_t>(order[static_cast<std::size_t>(s)])];
    double fx = max_abs_dot(U, x);
    for (int it = 0; it < 100; ++it) {
      Vec y = tangent_step(U, x);
      double ny = y.norm();
      if (!(ny > 0)) break;
      y /= ny;
      double fy = max_abs_dot(U, y);
      if (!(fy < fx - 1e-14)) break;
      x = y;
      fx = fy;
    }
    if (fx < z.half_width) {
      z.half_width = fx;
      z.axis = x;
    }
  }
  z.half_width = std::clamp(z.half_width, 0.0, 1.0);
  return z;
}

bool symmetric_hull_contains_ball(const WitnessSample& S, double omega) {
  if (omega <= 0.0) return true;
  if (S.directions.empty()) return false;
  const int d = S.dim();
  std::vector<Vec> pts;
  for (const auto& u : S.directions) {
    pts.push_back(u);
    pts.push_back(-u);
  }
  if (d <= 3 && S.directions.size() <= 64) {
    try {
      auto H = hull_facets(VPolytope(pts));
      return inball_radius_centered(H).radius >= omega - kTol;
    } catch (const DegenerateSpanError&) {
      return false;
    }
  }
  Mat U = half_set(S.directions);
  for (const auto& v : sphere_grid(d, 100 * d))
    if (max_abs_dot(U, v) < omega - kTol) return false;
  return min_covering_zone(S).half_width >= omega - kTol;
}

DiameterCertificate diameter_certificate(const HPolytope&, double lambda, const WitnessSample& S) {
  DiameterCertificate c;
  if (S.directions.empty()) return c;
  c.zone = min_covering_zone(S);
  if (c.zone.half_width <= 1e-12) return c;
  c.issued = true;
  c.bound = lambda / c.zone.half_width;
  return c;
}

double cap_diameter_bound(double phi) {
  if (!(phi > 0.0 && phi < M_PI / 4)) throw std::invalid_argument("cap_diameter_bound: phi must lie in (0, pi/4)");
  return 1.0 / std::sin(phi);
}

double cap_width_bound(double phi) {
  if (!(phi > 0.0 && phi < M_PI / 2)) throw std::invalid_argument("cap_width_bound: phi must lie in (0, pi/2)");
  return 1.0 / std::cos(phi);
}

}  // namespace helly
