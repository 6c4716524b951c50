#include "helly/colorful_functional.hpp"

#include "helly/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

namespace helly {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Calls visit(members) for every rainbow pick over the given classes, in
// lexicographic order; stops early when visit returns false.
bool for_each_pick(const std::vector<Family>& fams, const std::vector<int>& classes,
                   const std::function<bool(const std::vector<int>&)>& visit) {
  std::vector<int> m(classes.size(), 0);
  for (int c : classes)
    if (fams[static_cast<std::size_t>(c)].empty()) return true;
  while (true) {
    if (!visit(m)) return false;
    int k = static_cast<int>(m.size()) - 1;
    while (k >= 0) {
      const auto sz = static_cast<int>(fams[static_cast<std::size_t>(classes[static_cast<std::size_t>(k)])].size());
      if (++m[static_cast<std::size_t>(k)] < sz) break;
      m[static_cast<std::size_t>(k)] = 0;
      --k;
    }
    if (k < 0) return true;
  }
}

// Calls visit(subset) for every k-subset of [n] in lexicographic order.
bool for_each_subset(int n, int k, const std::function<bool(const std::vector<int>&)>& visit) {
  if (k > n) return true;
  std::vector<int> c(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) c[static_cast<std::size_t>(i)] = i;
  while (true) {
    if (!visit(c)) return false;
    int i = k - 1;
    while (i >= 0 && c[static_cast<std::size_t>(i)] == n - k + i) --i;
    if (i < 0) return true;
    ++c[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j) c[static_cast<std::size_t>(j)] = c[static_cast<std::size_t>(j) - 1] + 1;
  }
}

LogConcaveFn rainbow_min(const std::vector<Family>& fams, const std::vector<int>& classes,
                         const std::vector<int>& members) {
  std::vector<LogConcaveFn> fs;
  for (std::size_t k = 0; k < classes.size(); ++k)
    fs.push_back(fams[static_cast<std::size_t>(classes[k])][static_cast<std::size_t>(members[k])]);
  return pointwise_min(fs);
}

std::string describe(const std::vector<int>& classes, const std::vector<int>& members) {
  std::ostringstream os;
  for (std::size_t k = 0; k < classes.size(); ++k) os << (k ? " " : "") << classes[k] << ":" << members[k];
  return os.str();
}

Mat symmetric_base(const Mat& A) {
  Eigen::SelfAdjointEigenSolver<Mat> es(A.transpose() * A);
  return es.eigenvectors() * es.eigenvalues().cwiseSqrt().asDiagonal() * es.eigenvectors().transpose();
}

Box hull_box(const std::vector<Box>& boxes) {
  Box out = boxes.front();
  for (const auto& b : boxes) {
    out.lo = out.lo.cwiseMin(b.lo);
    out.hi = out.hi.cwiseMax(b.hi);
  }
  return out;
}

}  // namespace

LogConcaveFn clamp_function(const LogConcaveFn& f, double r) {
  if (!(r > 0.0)) throw PreconditionError("clamp_function: radius must be positive");
  const int d = f.dim();
  LogConcaveFn h = EllipsoidalFunction(r, Mat::Identity(d, d) / r, Vec::Zero(d));
  LogConcaveFn out = pointwise_min({f, h});
  if (f.box_declared()) {
    const Box b = *f.box();
    const Vec lo = b.lo.cwiseMax(Vec::Constant(d, -r)), hi = b.hi.cwiseMin(Vec::Constant(d, r));
    if ((hi - lo).minCoeff() > 0.0) out = out.with_box(lo, hi);
  }
  return out;
}

std::vector<Family> clamp_families(const std::vector<Family>& families, double r) {
  std::vector<Family> out;
  for (const auto& fam : families) {
    Family c;
    for (const auto& f : fam) c.push_back(clamp_function(f, r));
    out.push_back(std::move(c));
  }
  return out;
}

bool lowest_height_at_most(const LogConcaveFn& f, double target, double t, const JohnOptions& opt) {
  try {
    auto r = john_function(pointwise_min({f, LogConcaveFn(ConstClamp{f.dim(), t})}), opt);
    return r.g.integral() >= target;
  } catch (const InfeasibleError&) {
    return false;
  }
}

std::optional<EllipsoidalFunction> lowest_ellipsoidal(const LogConcaveFn& f, double target, const LowestOptions& opt) {
  if (!(target > 0.0)) throw PreconditionError("lowest_ellipsoidal: target must be positive");
  const int d = f.dim();
  auto fit = [&](double t) -> std::optional<EllipsoidalFunction> {
    try {
      return john_function(pointwise_min({f, LogConcaveFn(ConstClamp{d, t})}), opt.john).g;
    } catch (const InfeasibleError&) {
      return std::nullopt;
    }
  };
  const EllipsoidalFunction top = john_function(f, opt.john).g;
  // The John solver is accurate to about 1e-6, which the precondition allows.
  if (top.integral() < target * (1.0 - opt.target_slack)) return std::nullopt;
  // Integral of the John function of min(f, t) is nondecreasing in t.
  double hi = top.alpha, lo = hi;
  std::optional<EllipsoidalFunction> best = top;
  for (int k = 0; k < 60; ++k) {
    lo *= 0.5;
    auto g = fit(lo);
    if (!g || g->integral() < target) break;
    hi = lo;
    best = g;
  }
  for (int k = 0; k < opt.max_steps && hi - lo > opt.rel_tol * hi; ++k) {
    const double mid = 0.5 * (lo + hi);
    auto g = fit(mid);
    if (g && g->integral() >= target) {
      hi = mid;
      best = g;
    } else {
      lo = mid;
    }
  }
  EllipsoidalFunction out = *best;
  out.alpha *= target / out.integral();
  return out;
}

EllipsoidalFunction hellyklee_shrink(double delta, int d) {
  if (!(delta > 0.0 && delta <= 1.0)) throw PreconditionError("hellyklee_shrink: delta must lie in (0, 1]");
  return EllipsoidalFunction(delta * std::pow(delta / 4.0, d), Mat::Identity(d, d) * (4.0 / delta), Vec::Zero(d));
}

HellyKleeCheck check_hellyklee(const EllipsoidalFunction& h, double delta) {
  const int d = h.dim();
  HellyKleeCheck out;
  Eigen::SelfAdjointEigenSolver<Mat> es((h.A.transpose() * h.A).inverse());
  out.betas = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  out.betas_within = out.betas.minCoeff() >= delta / 4 - 1e-6 && out.betas.maxCoeff() <= 4 / delta + 1e-6;
  const EllipsoidalFunction g = hellyklee_shrink(delta, d);
  out.translate = -h.c;
  const LogConcaveFn hf(h);
  out.margin = translate_margin(hf, g, out.translate);
  const EllipsoidalFunction t = g.translated(out.translate);
  out.grid_excess = max_excess(LogConcaveFn(t), hf, t.bounding_box(), 10000);
  out.translate_verified = out.margin >= -1e-12 && out.grid_excess <= 1e-7;
  return out;
}

TranslateSelection colorful_translate_select(const std::vector<Family>& classes, const EllipsoidalFunction& g,
                                             const Box& search, int grid_points) {
  const int d = g.dim();
  const int n = grid_points > 0 ? grid_points : (d == 1 ? 4001 : 10201);
  const auto grid = box_grid(search, n);
  const std::size_t P = grid.size();
  std::vector<std::vector<std::vector<double>>> M(classes.size());
  for (std::size_t c = 0; c < classes.size(); ++c)
    for (const auto& f : classes[c]) {
      std::vector<double> row(P);
      for (std::size_t p = 0; p < P; ++p) row[p] = translate_margin(f, g, grid[p]);
      M[c].push_back(std::move(row));
    }

  TranslateSelection out;
  std::vector<int> all(classes.size());
  for (std::size_t c = 0; c < classes.size(); ++c) all[c] = static_cast<int>(c);

  // Rainbow hypothesis on the probe grid, with refinement on misses.
  bool rainbow_ok = for_each_pick(classes, all, [&](const std::vector<int>& m) {
    for (std::size_t p = 0; p < P; ++p) {
      double v = kInf;
      for (std::size_t c = 0; c < m.size(); ++c) v = std::min(v, M[c][static_cast<std::size_t>(m[c])][p]);
      if (v >= 0.0) return true;
    }
    if (find_translate_below(rainbow_min(classes, all, m), g, search)) return true;
    out.violating_pick = m;
    return false;
  });
  if (!rainbow_ok) {
    out.status = TranslateStatus::Violation;
    out.hint = "rainbow pick " + describe(all, out.violating_pick) + " has no translate below its minimum";
    return out;
  }

  for (std::size_t c = 0; c < classes.size(); ++c) {
    // The probe maximizing the class margin, which is the min over members.
    double best = -kInf;
    std::size_t arg = 0;
    for (std::size_t p = 0; p < P; ++p) {
      double v = kInf;
      for (const auto& row : M[c]) v = std::min(v, row[p]);
      if (v > best) {
        best = v;
        arg = p;
      }
    }
    const LogConcaveFn fmin = pointwise_min(classes[c]);
    std::optional<Vec> a;
    if (best >= 0.0) {
      const EllipsoidalFunction t = g.translated(grid[arg]);
      if (max_excess(LogConcaveFn(t), fmin, t.bounding_box(), 10000) <= 1e-7) a = grid[arg];
    }
    if (!a) a = find_translate_below(fmin, g, search);
    if (a) {
      out.status = TranslateStatus::Found;
      out.cls = static_cast<int>(c);
      out.translate = *a;
      return out;
    }
  }
  out.status = TranslateStatus::Inconclusive;
  out.hint = "no class intersection found on " + std::to_string(P) + " probes; refine the grid or widen the search box";
  return out;
}

std::optional<RainbowPick> find_hypothesis_violation(const std::vector<Family>& families, const JohnOptions& opt) {
  const int k = static_cast<int>(families.size());
  if (k == 0) return std::nullopt;
  const int d = families.front().front().dim();
  const double target = h_integral(d);
  std::optional<RainbowPick> bad;
  for_each_subset(k, std::min(k, 2 * d + 1), [&](const std::vector<int>& cls) {
    return for_each_pick(families, cls, [&](const std::vector<int>& m) {
      double J = 0.0;
      try {
        J = john_function(rainbow_min(families, cls, m), opt).g.integral();
      } catch (const InfeasibleError&) {
        J = 0.0;
      }
      if (J > target) return true;
      bad = RainbowPick{cls, m};
      return false;
    });
  });
  return bad;
}

ColorfulResult colorful_select(const std::vector<Family>& families, const ColorfulOptions& opt) {
  ColorfulResult out;
  if (families.empty() || families.front().empty()) throw PreconditionError("colorful_select: empty class");
  const int d = families.front().front().dim();
  const int K = static_cast<int>(families.size());
  if (K != 3 * d + 1) throw PreconditionError("colorful_select: expected 3d+1 classes");
  for (const auto& fam : families)
    if (fam.empty()) throw PreconditionError("colorful_select: empty class");
  if (d > 2) throw UnsupportedDimension(d, 2);
  const double hint = h_integral(d);

  // Clamping only serves properness, so functions with bounded support are
  // kept as they are.
  std::vector<Family> fams;
  for (const auto& fam : families) {
    Family c;
    for (const auto& f : fam) c.push_back(f.bounded_support() ? f : clamp_function(f, opt.clamp_radius));
    fams.push_back(std::move(c));
  }
  out.trace.push_back("functions with unbounded support clamped at radius " + std::to_string(opt.clamp_radius));

  if (opt.check_hypothesis) {
    if (auto bad = find_hypothesis_violation(fams, opt.john)) {
      out.status = ColorfulStatus::HypothesisViolation;
      out.violating_classes = bad->classes;
      out.violating_pick = bad->members;
      out.trace.push_back("hypothesis fails at " + describe(bad->classes, bad->members));
      return out;
    }
    out.trace.push_back("hypothesis verified on every rainbow selection of 2d+1 classes");
  }

  // Highest lowest ellipsoidal function over rainbow selections of 2d classes.
  std::optional<EllipsoidalFunction> top;
  LowestOptions lopt;
  lopt.john = opt.john;
  for_each_subset(K, 2 * d, [&](const std::vector<int>& cls) {
    for_each_pick(fams, cls, [&](const std::vector<int>& m) {
      const LogConcaveFn f = rainbow_min(fams, cls, m);
      // Only strictly higher candidates replace the incumbent.
      if (top && lowest_height_at_most(f, hint, top->alpha, opt.john)) return true;
      auto h = lowest_ellipsoidal(f, hint, lopt);
      if (!h) {
        out.trace.push_back("no lowest ellipsoidal function for " + describe(cls, m));
        return true;
      }
      if (!top || h->alpha > top->alpha) {
        top = h;
        out.base_classes = cls;
        out.base_pick = m;
      }
      return true;
    });
    return true;
  });
  if (!top) {
    out.status = ColorfulStatus::Inconclusive;
    out.trace.push_back("no rainbow selection of 2d classes admits a lowest ellipsoidal function");
    return out;
  }
  out.trace.push_back("highest lowest ellipsoidal function at " + describe(out.base_classes, out.base_pick) +
                      " with maximum " + std::to_string(top->alpha));

  // Position where the highest one is h_ball.
  PositionTransform T;
  T.alpha = top->alpha;
  T.A = symmetric_base(top->A);
  T.c = top->c;
  const Mat Ai = T.A.inverse();
  std::vector<Family> nfams;
  for (const auto& fam : fams) {
    Family c;
    for (const auto& f : fam) c.push_back(pullback(f, 1.0 / T.alpha, Ai, T.c));
    nfams.push_back(std::move(c));
  }
  const LogConcaveFn H1 = ConstClamp{d, 1.0};
  std::vector<LogConcaveFn> base;
  for (std::size_t k = 0; k < out.base_classes.size(); ++k)
    base.push_back(nfams[static_cast<std::size_t>(out.base_classes[k])][static_cast<std::size_t>(out.base_pick[k])]);
  {
    std::vector<LogConcaveFn> with_h = base;
    with_h.push_back(H1);
    auto jb = john_function(pointwise_min(with_h), opt.john);
    std::ostringstream os;
    os << "John function of the base selection with H1: alpha " << jb.g.alpha << ", integral ratio to h "
       << jb.g.integral() / hint;
    out.trace.push_back(os.str());
  }

  std::vector<int> remaining;
  for (int c = 0; c < K; ++c)
    if (std::find(out.base_classes.begin(), out.base_classes.end(), c) == out.base_classes.end()) remaining.push_back(c);

  // delta over every rainbow pick from the remaining classes.
  const double ld = std::log(static_cast<double>(d));
  const double log_theta_factor = d * std::log(opt.theta) + 0.5 * d * ld;
  const LogBound worst = fqh_ratio_bound(d, opt.theta);
  double delta = 1.0;
  bool ok = true;
  SelectOptions sopt;
  sopt.theta = opt.theta;
  sopt.john = opt.john;
  for_each_pick(nfams, remaining, [&](const std::vector<int>& m) {
    std::vector<LogConcaveFn> pool = base;
    pool.push_back(H1);
    for (std::size_t k = 0; k < remaining.size(); ++k)
      pool.push_back(nfams[static_cast<std::size_t>(remaining[k])][static_cast<std::size_t>(m[k])]);
    try {
      const SelectionCertificate cert = select_subset(pool, sopt);
      const double chain = std::exp(-std::log(cert.measured_ratio) - log_theta_factor);
      const double direct = john_function(pointwise_min(pool), opt.john).g.integral() / hint;
      std::ostringstream os;
      os << "pick " << describe(remaining, m) << ": |sigma| " << cert.sigma.size() << ", measured ratio "
         << cert.measured_ratio << ", delta chain " << chain << ", John ratio " << direct;
      out.trace.push_back(os.str());
      delta = std::min({delta, chain, direct});
    } catch (const HellyError& e) {
      out.trace.push_back("pick " + describe(remaining, m) + ": " + e.what());
      ok = false;
      return false;
    }
    return true;
  });
  if (!ok || !(delta > 0.0)) {
    out.status = ColorfulStatus::Inconclusive;
    return out;
  }
  out.delta = delta;
  const EllipsoidalFunction g = hellyklee_shrink(delta, d);
  const double log_hint = std::log(hint);
  const double ldw = -worst.log_value() - log_theta_factor;
  out.log_integral_bound = LogBound::from_log(ldw + 2.0 * d * (ldw - std::log(4.0)) + log_hint);

  std::vector<Family> rem;
  std::vector<Box> boxes;
  for (int c : remaining) {
    rem.push_back(nfams[static_cast<std::size_t>(c)]);
    for (const auto& f : nfams[static_cast<std::size_t>(c)])
      if (auto b = f.box()) boxes.push_back(*b);
  }
  if (boxes.empty()) {
    out.status = ColorfulStatus::Inconclusive;
    out.trace.push_back("remaining classes have no bounding boxes");
    return out;
  }
  Box hb = hull_box(boxes);
  const Box search{-hb.hi, -hb.lo};
  const TranslateSelection ts = colorful_translate_select(rem, g, search, opt.grid_points);
  if (ts.status != TranslateStatus::Found) {
    out.status = ColorfulStatus::Inconclusive;
    out.trace.push_back("translate selection: " + ts.hint);
    return out;
  }
  out.cls = remaining[static_cast<std::size_t>(ts.cls)];
  // Back to the original coordinates: f(x) = alpha f~(A (x - c)).
  out.witness = g.translated(ts.translate).position(T.alpha, T.A, -T.A * T.c);
  out.witness_log_integral = std::log(out.witness.integral());
  const EllipsoidalFunction& w = out.witness;
  out.witness_excess = max_excess(LogConcaveFn(w), pointwise_min(families[static_cast<std::size_t>(out.cls)]),
                                  w.bounding_box(), 10000);
  out.witness_verified = out.witness_excess <= 1e-7;
  out.status = out.witness_verified ? ColorfulStatus::Selected : ColorfulStatus::Inconclusive;
  out.trace.push_back("class " + std::to_string(out.cls) + " selected, witness excess " +
                      std::to_string(out.witness_excess));
  return out;
}

}  // namespace helly
