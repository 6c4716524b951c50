#include "helly/steinitz.hpp"

#include "helly/errors.hpp"
#include "helly/sphere.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace helly {

namespace {

VPolytope subset(const VPolytope& Q, const std::vector<int>& idx) {
  std::vector<Vec> pts;
  for (int i : idx) pts.push_back(Q[static_cast<std::size_t>(i)]);
  return VPolytope(pts);
}

bool next_combination(std::vector<int>& c, int n) {
  const int k = static_cast<int>(c.size());
  int i = k - 1;
  while (i >= 0 && c[static_cast<std::size_t>(i)] == n - k + i) --i;
  if (i < 0) return false;
  ++c[static_cast<std::size_t>(i)];
  for (int j = i + 1; j < k; ++j) c[static_cast<std::size_t>(j)] = c[static_cast<std::size_t>(j) - 1] + 1;
  return true;
}

}  // namespace

double steinitz_threshold(int d) { return 1.0 / (6.0 * d * d); }

SparsifyCheck verify_sparsification(const VPolytope& S, int d) {
  if (S.size() == 0) return {};
  if (S.dim() != d) throw PreconditionError("verify_sparsification: dimension mismatch");
  auto in = inball_radius_centered(S);
  SparsifyCheck c;
  c.inradius = in.origin_inside ? in.radius : 0.0;
  c.pass = c.inradius >= steinitz_threshold(d) - 1e-9;
  return c;
}

SparsifyResult best_subset_exhaustive(const VPolytope& Q, int k) {
  const int n = static_cast<int>(Q.size());
  if (n > 12) throw PreconditionError("exhaustive subset search refuses more than 12 points");
  const int d = Q.dim();
  if (d > 3) throw UnsupportedDimension(d, 3);
  const int m = std::min(k, n);
  std::vector<int> c(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) c[static_cast<std::size_t>(i)] = i;
  SparsifyResult best;
  best.exhaustive = true;
  best.inradius = -1.0;
  do {
    const double r = verify_sparsification(subset(Q, c), d).inradius;
    if (r > best.inradius) {
      best.inradius = r;
      best.indices = c;
    }
  } while (next_combination(c, n));
  return best;
}

SparsifyResult greedy_swap_subset(const VPolytope& Q, int k) {
  const int n = static_cast<int>(Q.size());
  const int d = Q.dim();
  const auto dirs = sphere_grid(d, 200 * d);
  Mat proj(static_cast<Eigen::Index>(dirs.size()), n);
  for (std::size_t r = 0; r < dirs.size(); ++r)
    for (int j = 0; j < n; ++j) proj(static_cast<Eigen::Index>(r), j) = dirs[r].dot(Q[static_cast<std::size_t>(j)]);
  auto score = [&](const std::vector<int>& S) {
    if (S.empty()) return -std::numeric_limits<double>::infinity();
    double s = std::numeric_limits<double>::infinity();
    for (Eigen::Index r = 0; r < proj.rows(); ++r) {
      double m = -std::numeric_limits<double>::infinity();
      for (int j : S) m = std::max(m, proj(r, j));
      s = std::min(s, m);
    }
    return s;
  };
  // Exact inradius when the hull captures the origin, the sampled score
  // (shifted below zero) otherwise.
  auto value = [&](const std::vector<int>& S) {
    if (d <= 3 && static_cast<int>(S.size()) > d) {
      const double r = verify_sparsification(subset(Q, S), d).inradius;
      if (r > 0.0) return r;
    }
    return score(S) - 10.0;
  };
  const int m = std::min(k, n);
  std::vector<int> best_set;
  double best_val = -std::numeric_limits<double>::infinity();
  const int seeds = n <= 64 ? n : 16;
  for (int seed = 0; seed < seeds; ++seed) {
    std::vector<int> S{seed};
    std::vector<char> used(static_cast<std::size_t>(n), 0);
    used[static_cast<std::size_t>(seed)] = 1;
    while (static_cast<int>(S.size()) < m) {
      int pick = -1;
      double best = -std::numeric_limits<double>::infinity();
      for (int j = 0; j < n; ++j) {
        if (used[static_cast<std::size_t>(j)]) continue;
        S.push_back(j);
        const double v = value(S);
        S.pop_back();
        if (pick < 0 || v > best) {
          best = v;
          pick = j;
        }
      }
      S.push_back(pick);
      used[static_cast<std::size_t>(pick)] = 1;
    }
    double cur = value(S);
    for (int pass = 0; pass < 100; ++pass) {
      bool improved = false;
      for (std::size_t i = 0; i < S.size(); ++i)
        for (int j = 0; j < n; ++j) {
          if (used[static_cast<std::size_t>(j)]) continue;
          const int old = S[i];
          S[i] = j;
          const double v = value(S);
          if (v > cur + 1e-12) {
            cur = v;
            used[static_cast<std::size_t>(old)] = 0;
            used[static_cast<std::size_t>(j)] = 1;
            improved = true;
          } else {
            S[i] = old;
          }
        }
      if (!improved) break;
    }
    std::sort(S.begin(), S.end());
    if (cur > best_val + 1e-12) {
      best_val = cur;
      best_set = S;
    }
  }
  // Pair exchanges on the winner escape single-swap local optima.
  if (n <= 64 && best_set.size() >= 2) {
    std::vector<int> S = best_set;
    for (int pass = 0; pass < 20; ++pass) {
      bool improved = false;
      std::vector<char> used(static_cast<std::size_t>(n), 0);
      for (int i : S) used[static_cast<std::size_t>(i)] = 1;
      for (std::size_t a = 0; a < S.size() && !improved; ++a)
        for (std::size_t b = a + 1; b < S.size() && !improved; ++b)
          for (int i = 0; i < n && !improved; ++i)
            for (int j = i + 1; j < n && !improved; ++j) {
              if (used[static_cast<std::size_t>(i)] || used[static_cast<std::size_t>(j)]) continue;
              std::vector<int> T = S;
              T[a] = i;
              T[b] = j;
              const double v = value(T);
              if (v > best_val + 1e-12) {
                best_val = v;
                S = T;
                improved = true;
              }
            }
      if (!improved) break;
    }
    std::sort(S.begin(), S.end());
    best_set = S;
  }
  SparsifyResult out;
  out.indices = best_set;
  out.inradius = d <= 3 ? verify_sparsification(subset(Q, best_set), d).inradius : std::max(0.0, best_val + 10.0);
  return out;
}

SparsifyResult sparsify(const VPolytope& Q) {
  const int d = Q.dim();
  if (Q.size() == 0) throw PreconditionError("sparsify: empty point set");
  for (const auto& u : sphere_grid(d, 100 * d)) {
    double h = -std::numeric_limits<double>::infinity();
    for (const auto& q : Q.points()) h = std::max(h, u.dot(q));
    if (h < 1.0 - 1e-9) {
      std::ostringstream os;
      os << "sparsify: conv(Q) misses the unit ball in direction (" << u.transpose() << "), support " << h;
      throw PreconditionError(os.str());
    }
  }
  const int k = 2 * d;
  SparsifyResult r = (Q.size() <= 12 && d <= 3) ? best_subset_exhaustive(Q, k) : greedy_swap_subset(Q, k);
  if (d <= 3 && r.inradius < steinitz_threshold(d) - 1e-9) {
    std::ostringstream os;
    os << "sparsify: best subset found has inradius " << r.inradius << " < 1/(6d^2) = " << steinitz_threshold(d);
    throw CounterexampleCandidate(os.str());
  }
  return r;
}

}  // namespace helly
