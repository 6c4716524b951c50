#include "helly/diameter_helly.hpp"

#include "helly/errors.hpp"
#include "helly/sphere.hpp"
#include "helly/zones.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <random>
#include <sstream>
#include <stdexcept>

namespace helly {

void ColorFamilies::validate() const {
  if (d < 1) throw std::invalid_argument("ColorFamilies: dimension must be positive");
  if (static_cast<int>(families.size()) != 2 * d)
    throw std::invalid_argument("ColorFamilies: expected " + std::to_string(2 * d) + " classes");
  for (const auto& cls : families) {
    if (cls.empty()) throw std::invalid_argument("ColorFamilies: empty class");
    for (const auto& P : cls)
      if (P.dim() != d) throw std::invalid_argument("ColorFamilies: dimension mismatch");
  }
}

const DiameterConstants& diameter_constants(int d) {
  static std::mutex mu;
  static std::map<int, DiameterConstants> table;
  std::lock_guard<std::mutex> lock(mu);
  auto it = table.find(d);
  if (it != table.end()) return it->second;
  DiameterConstants c;
  c.d = d;
  c.delta = 1.0 / (2.0 * d * d);
  c.rainbow_count = LogBound::from_value(2.0 * d).pow(2.0 * d);
  c.hypothesis_threshold = c.rainbow_count.value();
  c.final_bound = LogBound::from_value(c.delta) / c.rainbow_count;
  return table.emplace(d, c).first->second;
}

double intersection_diameter(const std::vector<HPolytope>& sets) {
  auto r = diameter(intersect(sets));
  return r.empty ? 0.0 : r.value;
}

namespace {

double intersection_width(const std::vector<HPolytope>& sets, const Vec& u) {
  HPolytope P = intersect(sets);
  if (!P.feasible()) return 0.0;
  return width(P, u);
}

std::vector<HPolytope> pick(const ColorFamilies& F, const std::vector<int>& picks) {
  std::vector<HPolytope> out;
  for (std::size_t i = 0; i < picks.size(); ++i) out.push_back(F.families[i][static_cast<std::size_t>(picks[i])]);
  return out;
}

// Lexicographic odometer over the product of sizes; returns false when done.
bool advance(std::vector<int>& idx, const std::vector<int>& sizes) {
  for (int k = static_cast<int>(idx.size()) - 1; k >= 0; --k) {
    if (++idx[static_cast<std::size_t>(k)] < sizes[static_cast<std::size_t>(k)]) return true;
    idx[static_cast<std::size_t>(k)] = 0;
  }
  return false;
}

std::string describe(const std::vector<int>& picks) {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < picks.size(); ++i) os << (i ? "," : "") << picks[i];
  os << ")";
  return os.str();
}

}  // namespace

DirectionalResult directional_colorful_check(const ColorFamilies& F, const Vec& u) {
  F.validate();
  DirectionalResult r;
  for (std::size_t i = 0; i < F.families.size(); ++i) {
    double w = intersection_width(F.families[i], u);
    if (w >= 1.0 - kTol) {
      r.class_index = static_cast<int>(i);
      r.width = w;
      return r;
    }
  }
  std::vector<int> sizes, idx(F.families.size(), 0);
  for (const auto& c : F.families) sizes.push_back(static_cast<int>(c.size()));
  do {
    double w = intersection_width(pick(F, idx), u);
    if (w < 1.0) {
      r.violation = RainbowSelection{idx};
      r.width = w;
      return r;
    }
  } while (advance(idx, sizes));
  throw CounterexampleCandidate("directional_colorful_check: every rainbow has width >= 1 but no class does");
}

std::vector<int> qhd_core_subfamily(const std::vector<HPolytope>& family, int d) {
  if (family.empty()) throw std::invalid_argument("qhd_core_subfamily: empty family");
  const double delta = diameter_constants(d).delta;
  const double full = intersection_diameter(family);
  if (!(full < delta)) {
    std::ostringstream os;
    os << "qhd_core_subfamily: intersection diameter " << full << " is not below " << delta;
    throw PreconditionError(os.str());
  }
  const int n = static_cast<int>(family.size());
  std::vector<int> best;
  double best_diam = 1.0;
  for (int k = 1; k <= std::min(2 * d, n); ++k) {
    std::vector<int> idx(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
    while (true) {
      std::vector<HPolytope> sub;
      for (int i : idx) sub.push_back(family[static_cast<std::size_t>(i)]);
      double dm = intersection_diameter(sub);
      if (dm < best_diam) {
        best_diam = dm;
        best = idx;
      }
      int j = k - 1;
      while (j >= 0 && idx[static_cast<std::size_t>(j)] == n - k + j) --j;
      if (j < 0) break;
      ++idx[static_cast<std::size_t>(j)];
      for (int l = j + 1; l < k; ++l) idx[static_cast<std::size_t>(l)] = idx[static_cast<std::size_t>(l - 1)] + 1;
    }
  }
  if (best.empty())
    throw CounterexampleCandidate("qhd_core_subfamily: no subfamily of size <= 2d has diameter < 1");
  return best;
}

DiameterDiagnostic diameter_diagnostic_trace(const ColorFamilies& F, int samples, std::uint64_t seed) {
  F.validate();
  const int d = F.d;
  const auto& K = diameter_constants(d);
  DiameterDiagnostic t;
  t.samples = samples;
  t.measure_threshold = 1.0 / K.hypothesis_threshold;
  for (const auto& cls : F.families) {
    auto core = qhd_core_subfamily(cls, d);
    std::vector<HPolytope> sub;
    for (int i : core) sub.push_back(cls[static_cast<std::size_t>(i)]);
    t.lambda = std::max(t.lambda, intersection_diameter(sub));
    t.core_subfamilies.push_back(core);
  }

  // Rainbows over the core subfamilies, with cached width oracles.
  std::vector<int> sizes, idx(F.families.size(), 0);
  for (const auto& c : t.core_subfamilies) sizes.push_back(static_cast<int>(c.size()));
  std::vector<std::vector<int>> rainbows;
  std::vector<WidthOracle> oracles;
  do {
    std::vector<int> orig;
    std::vector<HPolytope> sets;
    for (std::size_t i = 0; i < idx.size(); ++i) {
      int j = t.core_subfamilies[i][static_cast<std::size_t>(idx[i])];
      orig.push_back(j);
      sets.push_back(F.families[i][static_cast<std::size_t>(j)]);
    }
    rainbows.push_back(orig);
    oracles.emplace_back(intersect(sets));
  } while (advance(idx, sizes));

  std::mt19937_64 rng(seed);
  std::vector<int> hits(rainbows.size(), 0);
  std::vector<std::vector<Vec>> members(rainbows.size());
  bool covered = true;
  for (int s = 0; s < samples; ++s) {
    Vec u = random_unit(d, rng);
    bool any = false;
    for (std::size_t r = 0; r < rainbows.size(); ++r) {
      double w = oracles[r].empty() ? 0.0 : oracles[r](u);
      if (w <= t.lambda + kTol) {
        ++hits[r];
        members[r].push_back(u);
        any = true;
      }
    }
    covered = covered && any;
  }
  t.samples_covered = covered;
  std::size_t best = 0;
  for (std::size_t r = 1; r < rainbows.size(); ++r)
    if (hits[r] > hits[best]) best = r;
  t.r0.picks = rainbows[best];
  t.r0_measure = double(hits[best]) / samples;
  WitnessSample S;
  S.lambda = t.lambda;
  for (const auto& u : members[best]) {
    S.directions.push_back(u);
    S.directions.push_back(-u);
  }
  if (!S.directions.empty()) {
    t.omega = min_covering_zone(S).half_width;
    t.zone_bound = t.omega > 0 ? t.lambda / t.omega : std::numeric_limits<double>::infinity();
  }
  t.r0_diameter = intersection_diameter(pick(F, t.r0.picks));
  t.contradiction = t.r0_diameter <= K.hypothesis_threshold;
  return t;
}

DiameterSelectResult colorful_diameter_select(const ColorFamilies& F, const DiameterSelectOptions& opt) {
  F.validate();
  const auto& K = diameter_constants(F.d);
  DiameterSelectResult res;
  std::vector<int> sizes;
  double count = 1.0;
  for (const auto& c : F.families) {
    sizes.push_back(static_cast<int>(c.size()));
    count *= static_cast<double>(c.size());
  }
  auto check = [&](const std::vector<int>& picks) {
    double dm = intersection_diameter(pick(F, picks));
    if (dm <= K.hypothesis_threshold) {
      res.outcome = DiameterOutcome::HypothesisViolation;
      res.violation.picks = picks;
      res.violation_diameter = dm;
      return true;
    }
    return false;
  };
  if (count <= opt.max_rainbows) {
    std::vector<int> idx(F.families.size(), 0);
    do {
      if (check(idx)) return res;
    } while (advance(idx, sizes));
  } else {
    res.complete = false;
    std::mt19937_64 rng(opt.seed);
    std::vector<int> idx(F.families.size());
    for (int s = 0; s < opt.sampled_rainbows; ++s) {
      for (std::size_t i = 0; i < idx.size(); ++i)
        idx[i] = std::uniform_int_distribution<int>(0, sizes[i] - 1)(rng);
      if (check(idx)) return res;
    }
  }

  for (std::size_t i = 0; i < F.families.size(); ++i) {
    double dm = intersection_diameter(F.families[i]);
    if (dm > K.delta) {
      res.class_index = static_cast<int>(i);
      res.measured_diameter = dm;
      break;
    }
  }
  if (res.class_index < 0) {
    res.outcome = DiameterOutcome::CounterexampleCandidate;
    if (opt.diagnostic) res.trace = diameter_diagnostic_trace(F, opt.diagnostic_samples, opt.seed);
  }
  return res;
}

}  // namespace helly
