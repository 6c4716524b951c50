#include "helly/harness.hpp"

#include "helly/errors.hpp"
#include "helly/steinitz.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <sstream>
#include <thread>

namespace helly {

namespace {

constexpr int kSchemaVersion = 1;

std::string fmt(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string join(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ";" : "") + std::to_string(v[i]);
  return s;
}

std::string flag(bool b) { return b ? "1" : "0"; }

json box_json(const Box& b) { return {{"lo", to_json(b.lo)}, {"hi", to_json(b.hi)}}; }

Vec unit_vector(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> N(0, 1);
  Vec u(d);
  do {
    for (int i = 0; i < d; ++i) u(i) = N(rng);
  } while (u.norm() < 1e-6);
  return u / u.norm();
}

void require_dim(int d) {
  if (d < 1 || d > 3) throw UnsupportedDimension(d, 3);
}

// Set containing the box [0, s]^d: a slightly larger box cut by random
// facets that stay off the inner box.
HPolytope set_around_box(int d, double s, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(0.0, 0.5);
  Vec lo(d), hi(d);
  for (int i = 0; i < d; ++i) {
    lo(i) = -U(rng) * s;
    hi(i) = s + U(rng) * s;
  }
  std::vector<HPolytope> parts{HPolytope::box(lo, hi)};
  if (d >= 2) {
    const int cuts = 2 + static_cast<int>(rng() % 3);
    Mat A(cuts, d);
    Vec b(cuts);
    for (int k = 0; k < cuts; ++k) {
      const Vec u = unit_vector(d, rng);
      double h = 0.0;
      for (int i = 0; i < d; ++i) h += std::max(0.0, u(i)) * s;
      A.row(k) = u.transpose();
      b(k) = h + U(rng) * s;
    }
    parts.emplace_back(A, b);
  }
  return intersect(parts);
}

json gen_diameter(const GenParams& p, std::mt19937_64& rng) {
  const int d = p.d;
  const int classes = p.classes > 0 ? p.classes : 2 * d;
  if (p.sets < 1) throw PreconditionError("generate_instance: sets per class must be positive");
  if (classes != 2 * d) throw PreconditionError("generate_instance: diameter instances need 2d classes");
  const double s = std::max(10.0, 1.25 * diameter_constants(d).hypothesis_threshold / std::sqrt(d));
  json inst{{"kind", "diameter-colorful"}, {"d", d}, {"seed", p.seed}};
  inst["common_box"] = box_json(Box{Vec::Zero(d), Vec::Constant(d, s)});
  json cls = json::array();
  for (int c = 0; c < classes; ++c) {
    json sets = json::array();
    for (int k = 0; k < p.sets; ++k) sets.push_back(to_json(set_around_box(d, s, rng)));
    cls.push_back(sets);
  }
  if (p.inject_violation) {
    const int c = static_cast<int>(rng() % static_cast<std::uint64_t>(classes));
    const int m = static_cast<int>(rng() % static_cast<std::uint64_t>(p.sets));
    const Vec lo = Vec::Constant(d, 10.0 * s);
    cls[static_cast<std::size_t>(c)][static_cast<std::size_t>(m)] = to_json(HPolytope::box(lo, lo + Vec::Constant(d, 0.5)));
    inst["injected"] = {{"class", c}, {"member", m}};
  }
  inst["classes"] = cls;
  return inst;
}

// min(exp(-max(<s_j, x> + t_j)) on a domain containing [-1/2, 1/2]^d, level).
LogConcaveFn random_func(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> N(0, 1);
  std::uniform_real_distribution<double> L(-3.0, -0.8), R(0.8, 3.0), C(0.7, 2.0), O(0.8, 2.0);
  Vec lo(d), hi(d);
  for (int i = 0; i < d; ++i) {
    lo(i) = L(rng);
    hi(i) = R(rng);
  }
  HPolytope dom = HPolytope::box(lo, hi);
  if (d >= 2) {
    const Vec u = unit_vector(d, rng);
    Mat A = u.transpose();
    dom = intersect({dom, HPolytope(A, Vec::Constant(1, O(rng) * std::sqrt(d)))});
  }
  PolyLogLinear p;
  const int pieces = 1 + static_cast<int>(rng() % 2);
  for (int j = 0; j < pieces; ++j) {
    Vec s(d);
    for (int i = 0; i < d; ++i) s(i) = 0.6 * N(rng);
    p.slopes.push_back(s);
    p.intercepts.push_back(0.3 * N(rng));
  }
  p.domain = dom;
  return pointwise_min({LogConcaveFn(p), LogConcaveFn(ConstClamp{d, C(rng)})}).with_box(lo, hi);
}

json gen_func(const GenParams& p, std::mt19937_64& rng) {
  if (p.n < 1) throw PreconditionError("generate_instance: n must be positive");
  json fs = json::array();
  for (int i = 0; i < p.n; ++i) fs.push_back(to_json(random_func(p.d, rng)));
  return {{"kind", "func-helly"}, {"d", p.d}, {"seed", p.seed}, {"functions", fs}};
}

// exp(-s |x - m|_inf) on the cube of half-width w about m, optionally capped.
// With s <= 0.3, |m|_inf <= 0.3 and w >= 2 every function is at least
// exp(-0.6) >= 0.54 on [-1.7, 1.7]^d, so every minimum lies above
// 0.54 h_ball(x / 1.7), whose integral exceeds that of h_ball.
LogConcaveFn random_tent(int d, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> S(0.0, 0.3), M(-0.3, 0.3), W(2.0, 3.0), C(1.0, 2.0);
  const double s = S(rng), w = W(rng);
  Vec m(d);
  for (int i = 0; i < d; ++i) m(i) = M(rng);
  PolyLogLinear p;
  for (int i = 0; i < d; ++i)
    for (double sign : {1.0, -1.0}) {
      Vec e = Vec::Zero(d);
      e(i) = sign * s;
      p.slopes.push_back(e);
      p.intercepts.push_back(-sign * s * m(i));
    }
  p.domain = HPolytope::box(m - Vec::Constant(d, w), m + Vec::Constant(d, w));
  LogConcaveFn f(p);
  if (rng() % 2 == 0) f = pointwise_min({f, LogConcaveFn(ConstClamp{d, C(rng)})});
  return f;
}

json gen_colorful(const GenParams& p, std::mt19937_64& rng) {
  const int d = p.d;
  if (d > 2) throw UnsupportedDimension(d, 2);
  const int classes = p.classes > 0 ? p.classes : 3 * d + 1;
  if (classes != 3 * d + 1) throw PreconditionError("generate_instance: colorful functional instances need 3d+1 classes");
  if (p.sets < 1) throw PreconditionError("generate_instance: class size must be positive");
  json cls = json::array();
  for (int c = 0; c < classes; ++c) {
    json fam = json::array();
    const int k = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(p.sets));
    for (int i = 0; i < k; ++i) fam.push_back(to_json(random_tent(d, rng)));
    cls.push_back(fam);
  }
  return {{"kind", "colorful-func"}, {"d", d}, {"seed", p.seed}, {"classes", cls}};
}

// Points whose hull contains the unit disk exactly at inradius 1.
std::vector<Vec> random_steinitz_cloud(int d, int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> R(1.0, 2.0);
  for (;;) {
    std::vector<Vec> pts;
    for (int i = 0; i < n; ++i) pts.push_back(R(rng) * unit_vector(d, rng));
    auto in = inball_radius_centered(VPolytope(pts));
    if (!in.origin_inside || in.radius < 1e-3) continue;
    for (auto& x : pts) x /= in.radius;
    return pts;
  }
}

}  // namespace

json to_json(const Vec& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

json to_json(const Mat& m) {
  json a = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) a.push_back(to_json(Vec(m.row(i).transpose())));
  return a;
}

json to_json(const HPolytope& P) { return {{"A", to_json(P.A())}, {"b", to_json(P.b())}, {"dim", P.dim()}}; }

json to_json(const EllipsoidalFunction& g) {
  return {{"kind", "ellipsoidal"}, {"alpha", g.alpha}, {"A", to_json(g.A)}, {"c", to_json(g.c)}};
}

json to_json(const LogConcaveFn& f) {
  json j = std::visit(
      [](const auto& n) -> json {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, PolyLogLinear>) {
          json s = json::array();
          for (const auto& v : n.slopes) s.push_back(to_json(v));
          return {{"kind", "polyloglinear"}, {"slopes", s}, {"intercepts", n.intercepts}, {"domain", to_json(n.domain)}};
        } else if constexpr (std::is_same_v<T, EllipsoidalFunction>) {
          return to_json(n);
        } else if constexpr (std::is_same_v<T, ConstClamp>) {
          return {{"kind", "const"}, {"d", n.d}, {"level", n.level}};
        } else {
          json c = json::array();
          for (const auto& ch : n.children) c.push_back(to_json(ch));
          return {{"kind", "min"}, {"children", c}};
        }
      },
      f.node());
  if (auto b = f.box()) j["box"] = box_json(*b);
  return j;
}

json to_json(const SelectionCertificate& c) {
  json contacts = json::array();
  for (const auto& u : c.contacts) contacts.push_back(to_json(u));
  return {{"sigma", c.sigma},
          {"tau1", c.tau1},
          {"minimal_norm_index", c.minimal_norm_index},
          {"position_transform",
           {{"alpha", c.position_transform.alpha}, {"A", to_json(c.position_transform.A)}, {"c", to_json(c.position_transform.c)}}},
          {"log_ratio_bound", c.ratio_bound.log_value()},
          {"measured_ratio", c.measured_ratio},
          {"contacts", contacts},
          {"index_map", c.index_map},
          {"q_inradius", c.q_inradius},
          {"p_inradius", c.p_inradius},
          {"certified", c.certified}};
}

json to_json(const ColorfulResult& r) {
  static const char* names[] = {"selected", "hypothesis-violation", "inconclusive"};
  json j{{"status", names[static_cast<int>(r.status)]},
         {"class", r.cls},
         {"delta", r.delta},
         {"log_integral_bound", r.log_integral_bound.log_value()},
         {"base_classes", r.base_classes},
         {"base_pick", r.base_pick},
         {"trace", r.trace}};
  if (r.status == ColorfulStatus::Selected) {
    j["witness"] = to_json(r.witness);
    j["witness_log_integral"] = r.witness_log_integral;
    j["witness_excess"] = r.witness_excess;
    j["witness_verified"] = r.witness_verified;
  }
  if (r.status == ColorfulStatus::HypothesisViolation) {
    j["violating_classes"] = r.violating_classes;
    j["violating_pick"] = r.violating_pick;
  }
  return j;
}

json to_json(const DiameterSelectResult& r) {
  static const char* names[] = {"class-selected", "hypothesis-violation", "counterexample-candidate"};
  json j{{"outcome", names[static_cast<int>(r.outcome)]}, {"complete", r.complete}};
  if (r.outcome == DiameterOutcome::ClassSelected) {
    j["class"] = r.class_index;
    j["measured_diameter"] = r.measured_diameter;
  } else if (r.outcome == DiameterOutcome::HypothesisViolation) {
    j["violating_pick"] = r.violation.picks;
    j["violation_diameter"] = r.violation_diameter;
  }
  return j;
}

Vec vec_from_json(const json& j) {
  Vec v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  return v;
}

Mat mat_from_json(const json& j) {
  if (j.empty()) return Mat(0, 0);
  Mat m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(j[0].size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (j[i].size() != static_cast<std::size_t>(m.cols())) throw PreconditionError("ragged matrix rows");
    for (std::size_t k = 0; k < j[i].size(); ++k)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = j[i][k].get<double>();
  }
  return m;
}

HPolytope hpolytope_from_json(const json& j) {
  Mat A = mat_from_json(j.at("A"));
  if (A.rows() == 0) return HPolytope::whole_space(j.at("dim").get<int>());
  return HPolytope(A, vec_from_json(j.at("b")));
}

LogConcaveFn fn_from_json(const json& j) {
  const std::string type = j.at("kind").get<std::string>();
  auto make = [&]() -> LogConcaveFn {
    if (type == "polyloglinear") {
      PolyLogLinear p;
      for (const auto& s : j.at("slopes")) p.slopes.push_back(vec_from_json(s));
      p.intercepts = j.at("intercepts").get<std::vector<double>>();
      p.domain = hpolytope_from_json(j.at("domain"));
      return p;
    }
    if (type == "ellipsoidal")
      return EllipsoidalFunction(j.at("alpha").get<double>(), mat_from_json(j.at("A")), vec_from_json(j.at("c")));
    if (type == "const") return ConstClamp{j.at("d").get<int>(), j.at("level").get<double>()};
    if (type == "min") {
      MinOf m;
      for (const auto& c : j.at("children")) m.children.push_back(fn_from_json(c));
      return m;
    }
    throw PreconditionError("unknown function kind: " + type);
  };
  LogConcaveFn f = make();
  if (j.contains("box")) f = f.with_box(vec_from_json(j["box"].at("lo")), vec_from_json(j["box"].at("hi")));
  return f;
}

namespace {

LogConcaveFn boxed_fn(const json& j) {
  if (!j.contains("box")) throw PreconditionError("instance functions need a bounding box");
  return fn_from_json(j);
}

}  // namespace

ColorFamilies diameter_instance(const json& inst) {
  ColorFamilies F;
  F.d = inst.at("d").get<int>();
  for (const auto& cls : inst.at("classes")) {
    std::vector<HPolytope> fam;
    for (const auto& s : cls) fam.push_back(hpolytope_from_json(s));
    F.families.push_back(std::move(fam));
  }
  return F;
}

std::vector<LogConcaveFn> func_instance(const json& inst) {
  std::vector<LogConcaveFn> fs;
  for (const auto& f : inst.at("functions")) fs.push_back(boxed_fn(f));
  return fs;
}

std::vector<Family> colorful_instance(const json& inst) {
  std::vector<Family> out;
  for (const auto& cls : inst.at("classes")) {
    Family fam;
    for (const auto& f : cls) fam.push_back(boxed_fn(f));
    out.push_back(std::move(fam));
  }
  return out;
}

std::string instance_hash(const json& inst) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : inst.dump()) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

json generate_instance(const GenParams& p) {
  require_dim(p.d);
  std::mt19937_64 rng(p.seed);
  if (p.kind == "diameter-colorful") return gen_diameter(p, rng);
  if (p.kind == "func-helly") return gen_func(p, rng);
  if (p.kind == "colorful-func") return gen_colorful(p, rng);
  throw PreconditionError("generate_instance: unknown kind " + p.kind);
}

json run_oracle(const std::string& kind, const json& inst) {
  if (kind == "subset-ratio") {
    auto fs = func_instance(inst);
    const int d = inst.at("d").get<int>();
    const int k = inst.value("k", 2 * d + 1);
    auto r = exhaustive_subset_ratio(fs, k, inst.value("tol", 1e-9));
    return {{"oracle", kind}, {"k", k}, {"subset", r.subset}, {"ratio", r.ratio}};
  }
  if (kind == "steinitz") {
    std::vector<Vec> pts;
    for (const auto& x : inst.at("points")) pts.push_back(vec_from_json(x));
    if (pts.empty()) throw PreconditionError("steinitz oracle: no points");
    const int d = static_cast<int>(pts.front().size());
    auto r = best_subset_exhaustive(VPolytope(pts), inst.value("k", 2 * d));
    return {{"oracle", kind}, {"subset", r.indices}, {"inradius", r.inradius}};
  }
  if (kind == "rainbow-diameter") {
    ColorFamilies F = diameter_instance(inst);
    double count = 1;
    for (const auto& f : F.families) count *= static_cast<double>(f.size());
    if (count > 4096) throw PreconditionError("rainbow oracle refuses more than 4096 rainbows");
    std::vector<int> pick(F.families.size(), 0), best;
    double min_diam = std::numeric_limits<double>::infinity();
    for (;;) {
      std::vector<HPolytope> sets;
      for (std::size_t c = 0; c < pick.size(); ++c) sets.push_back(F.families[c][static_cast<std::size_t>(pick[c])]);
      const double dm = intersection_diameter(sets);
      if (dm < min_diam) {
        min_diam = dm;
        best = pick;
      }
      std::size_t c = 0;
      while (c < pick.size() && ++pick[c] == static_cast<int>(F.families[c].size())) pick[c++] = 0;
      if (c == pick.size()) break;
    }
    json classes = json::array();
    for (const auto& f : F.families) classes.push_back(intersection_diameter(f));
    return {{"oracle", kind}, {"min_rainbow_diameter", min_diam}, {"argmin_pick", best}, {"class_diameters", classes}};
  }
  if (kind == "quadrature") {
    auto fs = func_instance(inst);
    const double tol = inst.value("tol", 1e-9);
    json each = json::array();
    for (const auto& f : fs) each.push_back(integrate(f, tol).value);
    auto all = integrate(pointwise_min(fs), tol);
    return {{"oracle", kind}, {"integrals", each}, {"min_integral", all.value}, {"error", all.error}};
  }
  throw PreconditionError("unknown oracle: " + kind);
}

ExperimentConfig experiment_config_from_json(const json& j) {
  static const char* usage =
      "experiment config needs {\"kind\": func-helly|diameter-colorful|colorful-func|steinitz, \"trials\": N > 0}";
  if (!j.is_object() || j.empty() || !j.contains("kind")) throw PreconditionError(usage);
  ExperimentConfig c;
  c.kind = j.at("kind").get<std::string>();
  c.d = j.value("d", 1);
  c.trials = j.value("trials", 0);
  c.seed = j.value("seed", std::uint64_t{1});
  c.n = j.value("n", 5);
  c.sets = j.value("sets", 3);
  c.tol = j.value("tol", 1e-9);
  c.inject = j.value("inject", false);
  c.plot = j.value("plot", false);
  if (c.trials <= 0) throw PreconditionError(usage);
  if (c.kind != "func-helly" && c.kind != "diameter-colorful" && c.kind != "colorful-func" && c.kind != "steinitz")
    throw PreconditionError(usage);
  require_dim(c.d);
  return c;
}

int thread_count() {
  if (const char* s = std::getenv("HELLY_THREADS")) {
    const int n = std::atoi(s);
    if (n > 0) return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

using Row = std::vector<std::string>;

std::vector<std::string> kind_columns(const std::string& kind) {
  if (kind == "func-helly")
    return {"n", "sigma_size", "sigma", "measured_ratio", "log_measured_ratio", "log_ratio_bound",
            "exhaustive_best_ratio", "certified", "roundtrip_error", "pass_size", "pass_ratio", "pass_bound",
            "pass_roundtrip"};
  if (kind == "diameter-colorful")
    return {"sets", "injected_class", "injected_member", "outcome", "class_index", "exact_diameter",
            "threshold", "violating_pick", "pass_class", "pass_violation"};
  if (kind == "colorful-func")
    return {"class_sizes", "status", "class_index", "delta", "witness_log_integral", "log_integral_bound",
            "witness_excess", "pass_witness"};
  return {"n", "selected", "inradius", "exhaustive_inradius", "threshold", "pass_threshold", "pass_ratio"};
}

Row func_row(const ExperimentConfig& cfg, const json& inst) {
  auto fs = func_instance(inst);
  SelectOptions opt;
  opt.integration_tol = cfg.tol;
  auto c = select_subset(fs, opt);
  double rt = 0.0;
  const Box b = *fs.front().box();
  for (int k = 0; k < 16; ++k) {
    Vec x(cfg.d);
    for (int i = 0; i < cfg.d; ++i) x(i) = ((k >> i) & 1) ? b.hi(i) : b.lo(i);
    if (k >= (1 << cfg.d)) x = b.lo + (b.hi - b.lo) * (k / 16.0);
    rt = std::max(rt, (c.position_transform.to_original(c.position_transform.to_normalized(x)) - x).norm());
  }
  std::string exh;
  if (cfg.n <= 8) exh = fmt(exhaustive_subset_ratio(fs, 2 * cfg.d + 1, cfg.tol).ratio);
  const double lr = std::log(c.measured_ratio), lb = c.ratio_bound.log_value();
  const bool ps = static_cast<int>(c.sigma.size()) <= 2 * cfg.d + 1;
  const bool pr = std::isfinite(c.measured_ratio) && c.measured_ratio >= 1.0 - 1e-6;
  const bool pb = lr <= lb;
  const bool pt = rt < 1e-5;
  return {std::to_string(fs.size()), std::to_string(c.sigma.size()), join(c.sigma), fmt(c.measured_ratio), fmt(lr),
          fmt(lb), exh, flag(c.certified), fmt(rt), flag(ps), flag(pr), flag(pb), flag(pt), flag(ps && pr && pb && pt)};
}

Row diameter_row(const ExperimentConfig& cfg, const json& inst) {
  const ColorFamilies F = diameter_instance(inst);
  auto r = colorful_diameter_select(F);
  const double thr = diameter_constants(cfg.d).delta;
  const bool injected = inst.contains("injected");
  const int ic = injected ? inst["injected"]["class"].get<int>() : -1;
  const int im = injected ? inst["injected"]["member"].get<int>() : -1;
  double exact = 0.0;
  if (r.outcome == DiameterOutcome::ClassSelected)
    exact = intersection_diameter(F.families[static_cast<std::size_t>(r.class_index)]);
  static const char* names[] = {"class-selected", "hypothesis-violation", "counterexample-candidate"};
  const bool pc = injected || (r.outcome == DiameterOutcome::ClassSelected && exact > thr);
  const bool pv = !injected || (r.outcome == DiameterOutcome::HypothesisViolation &&
                                r.violation.picks.size() == F.families.size() &&
                                r.violation.picks[static_cast<std::size_t>(ic)] == im);
  return {std::to_string(cfg.sets), std::to_string(ic), std::to_string(im), names[static_cast<int>(r.outcome)],
          std::to_string(r.class_index), fmt(exact), fmt(thr),
          r.outcome == DiameterOutcome::HypothesisViolation ? join(r.violation.picks) : "",
          flag(pc), flag(pv), flag(pc && pv)};
}

Row colorful_row(const ExperimentConfig&, const json& inst) {
  auto fams = colorful_instance(inst);
  auto r = colorful_select(fams);
  std::vector<int> sizes;
  for (const auto& f : fams) sizes.push_back(static_cast<int>(f.size()));
  static const char* names[] = {"selected", "hypothesis-violation", "inconclusive"};
  double excess = std::numeric_limits<double>::infinity();
  if (r.status == ColorfulStatus::Selected)
    excess = max_excess(LogConcaveFn(r.witness), pointwise_min(fams[static_cast<std::size_t>(r.cls)]),
                        r.witness.bounding_box(), 10000);
  const bool pw = r.status == ColorfulStatus::Selected && excess <= 1e-7;
  return {join(sizes), names[static_cast<int>(r.status)], std::to_string(r.cls), fmt(r.delta),
          fmt(r.witness_log_integral), fmt(r.log_integral_bound.log_value()), fmt(excess), flag(pw), flag(pw)};
}

Row steinitz_row(const ExperimentConfig& cfg, const json& inst) {
  std::vector<Vec> pts;
  for (const auto& x : inst.at("points")) pts.push_back(vec_from_json(x));
  const VPolytope Q(pts);
  auto s = sparsify(Q);
  std::vector<Vec> sel;
  for (int i : s.indices) sel.push_back(Q[static_cast<std::size_t>(i)]);
  const double in = verify_sparsification(VPolytope(sel), cfg.d).inradius;
  const double ex = best_subset_exhaustive(Q, 2 * cfg.d).inradius;
  const double thr = steinitz_threshold(cfg.d);
  const bool pt = in >= thr - 1e-9, pr = in >= 0.9 * ex - 1e-12;
  return {std::to_string(Q.size()), join(s.indices), fmt(in), fmt(ex), fmt(thr), flag(pt), flag(pr), flag(pt && pr)};
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  if (cfg.trials <= 0 || cfg.kind.empty()) throw PreconditionError("run_experiment: empty config");
  ExperimentResult out;
  out.header = {"schema_version", "kind", "d", "trial", "seed", "instance_hash"};
  for (const auto& c : kind_columns(cfg.kind)) out.header.push_back(c);
  out.header.push_back("pass");
  out.header.push_back("error");
  const std::size_t width = out.header.size();
  out.rows.assign(static_cast<std::size_t>(cfg.trials), {});

  auto run_trial = [&](int t) {
    const std::uint64_t seed = cfg.seed + static_cast<std::uint64_t>(t);
    Row row{std::to_string(kSchemaVersion), cfg.kind, std::to_string(cfg.d), std::to_string(t), std::to_string(seed)};
    try {
      Row body;
      if (cfg.kind == "steinitz") {
        std::mt19937_64 rng(seed);
        const int n = 2 * cfg.d + 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(std::max(1, cfg.n - 2 * cfg.d)));
        json pts = json::array();
        for (const auto& x : random_steinitz_cloud(cfg.d, n, rng)) pts.push_back(to_json(x));
        const json inst{{"kind", "steinitz"}, {"d", cfg.d}, {"seed", seed}, {"points", pts}};
        row.push_back(instance_hash(inst));
        body = steinitz_row(cfg, inst);
      } else {
        GenParams p;
        p.kind = cfg.kind;
        p.d = cfg.d;
        p.n = cfg.n;
        p.sets = cfg.sets;
        p.seed = seed;
        p.inject_violation = cfg.inject && t % 2 == 1;
        const json inst = generate_instance(p);
        row.push_back(instance_hash(inst));
        if (cfg.kind == "func-helly") body = func_row(cfg, inst);
        else if (cfg.kind == "diameter-colorful") body = diameter_row(cfg, inst);
        else body = colorful_row(cfg, inst);
      }
      row.insert(row.end(), body.begin(), body.end());
      row.push_back("");
    } catch (const std::exception& e) {
      std::string msg = e.what();
      std::replace(msg.begin(), msg.end(), ',', ';');
      std::replace(msg.begin(), msg.end(), '\n', ' ');
      if (row.size() < 6) row.push_back("");
      row.resize(width - 2);
      row.push_back("0");
      row.push_back(msg);
    }
    out.rows[static_cast<std::size_t>(t)] = std::move(row);
  };

  const int workers = std::min(thread_count(), cfg.trials);
  if (workers <= 1) {
    for (int t = 0; t < cfg.trials; ++t) run_trial(t);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (int t = next++; t < cfg.trials; t = next++) run_trial(t);
      });
    for (auto& th : pool) th.join();
  }
  for (const auto& r : out.rows)
    if (r[width - 2] == "1") ++out.passed;
  return out;
}

std::string to_csv(const ExperimentResult& r) {
  std::ostringstream os;
  auto line = [&](const std::vector<std::string>& v) {
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
    os << '\n';
  };
  line(r.header);
  for (const auto& row : r.rows) line(row);
  return os.str();
}

std::string scatter_svg(const ExperimentResult& r, const std::string& xcol, const std::string& ycol) {
  auto col = [&](const std::string& name) {
    auto it = std::find(r.header.begin(), r.header.end(), name);
    if (it == r.header.end()) throw PreconditionError("scatter_svg: no column " + name);
    return static_cast<std::size_t>(it - r.header.begin());
  };
  const std::size_t xi = col(xcol), yi = col(ycol);
  std::vector<double> xs, ys;
  for (const auto& row : r.rows) {
    xs.push_back(std::strtod(row[xi].c_str(), nullptr));
    ys.push_back(std::strtod(row[yi].c_str(), nullptr));
  }
  auto range = [](const std::vector<double>& v) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (double x : v)
      if (std::isfinite(x)) lo = std::min(lo, x), hi = std::max(hi, x);
    if (!std::isfinite(lo)) lo = 0, hi = 1;
    if (hi - lo < 1e-12) lo -= 0.5, hi += 0.5;
    return std::pair{lo, hi};
  };
  const auto [x0, x1] = range(xs);
  const auto [y0, y1] = range(ys);
  const double W = 640, H = 480, M = 50;
  auto px = [&](double x) { return M + (std::isfinite(x) ? (x - x0) / (x1 - x0) : (x > 0 ? 1.0 : 0.0)) * (W - 2 * M); };
  auto py = [&](double y) { return H - M - (std::isfinite(y) ? (y - y0) / (y1 - y0) : (y > 0 ? 1.0 : 0.0)) * (H - 2 * M); };
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<line x1=\"" << M << "\" y1=\"" << H - M << "\" x2=\"" << W - M << "\" y2=\"" << H - M << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << M << "\" y1=\"" << M << "\" x2=\"" << M << "\" y2=\"" << H - M << "\" stroke=\"black\"/>\n";
  os << "<text x=\"" << W / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\">" << xcol << " [" << fmt(x0) << ", "
     << fmt(x1) << "]</text>\n";
  os << "<text x=\"14\" y=\"" << H / 2 << "\" transform=\"rotate(-90 14 " << H / 2 << ")\" text-anchor=\"middle\">" << ycol
     << " [" << fmt(y0) << ", " << fmt(y1) << "]</text>\n";
  for (std::size_t i = 0; i < xs.size(); ++i)
    os << "<circle class=\"point\" cx=\"" << fmt(px(xs[i])) << "\" cy=\"" << fmt(py(ys[i])) << "\" r=\"3\" fill=\"steelblue\"/>\n";
  os << "</svg>\n";
  return os.str();
}

}  // namespace helly
