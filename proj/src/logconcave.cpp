#include "helly/logconcave.hpp"

#include "helly/ellipsoid.hpp"
#include "helly/errors.hpp"
#include "helly/numerics.hpp"

#include <Eigen/Cholesky>
#include <Eigen/LU>
#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace helly {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_dim(int got, int want, const char* what) {
  if (got != want)
    throw PreconditionError(std::string(what) + ": dimension " + std::to_string(got) + " != " +
                            std::to_string(want));
}

std::optional<Box> polytope_box(const HPolytope& P) {
  const int d = P.dim();
  Box b{Vec(d), Vec(d)};
  for (int k = 0; k < d; ++k) {
    Vec e = Vec::Unit(d, k);
    auto hi = support(P, e);
    auto lo = support(P, -e);
    if (!hi.bounded() || !lo.bounded()) return std::nullopt;
    b.hi(k) = hi.value;
    b.lo(k) = -lo.value;
  }
  return b;
}

std::optional<Box> intersect_boxes(const std::optional<Box>& a, const std::optional<Box>& b) {
  if (!a) return b;
  if (!b) return a;
  return Box{a->lo.cwiseMax(b->lo), a->hi.cwiseMin(b->hi)};
}

std::optional<Box> derive_box(const LogConcaveFn::Node& n) {
  if (auto* p = std::get_if<PolyLogLinear>(&n)) return polytope_box(p->domain);
  if (auto* e = std::get_if<EllipsoidalFunction>(&n)) return e->bounding_box();
  if (std::holds_alternative<ConstClamp>(n)) return std::nullopt;
  std::optional<Box> out;
  for (const auto& ch : std::get<MinOf>(n).children) out = intersect_boxes(out, ch.box());
  return out;
}

int node_dim(const LogConcaveFn::Node& n) {
  if (auto* p = std::get_if<PolyLogLinear>(&n)) return p->domain.dim();
  if (auto* e = std::get_if<EllipsoidalFunction>(&n)) return e->dim();
  if (auto* c = std::get_if<ConstClamp>(&n)) return c->d;
  return std::get<MinOf>(n).children.front().dim();
}

// Closed parameter interval {t : x + t e_k in closure of support}.
std::pair<double, double> line_interval(const LogConcaveFn& f, const Vec& x, int k) {
  const auto& n = f.node();
  if (auto* p = std::get_if<PolyLogLinear>(&n)) {
    double lo = -kInf, hi = kInf;
    const Mat& A = p->domain.A();
    const Vec& b = p->domain.b();
    for (int i = 0; i < A.rows(); ++i) {
      const double a = A(i, k);
      const double r = b(i) - (A.row(i).dot(x) - a * x(k));
      if (std::abs(a) < 1e-300) {
        if (r < -1e-12) return {1.0, 0.0};
      } else if (a > 0) {
        hi = std::min(hi, r / a);
      } else {
        lo = std::max(lo, r / a);
      }
    }
    return {lo, hi};
  }
  if (auto* e = std::get_if<EllipsoidalFunction>(&n)) {
    Vec y = x;
    y(k) = 0.0;
    Vec w = e->A * (y - e->c);
    Vec a = e->A.col(k);
    const double qa = a.squaredNorm(), qb = a.dot(w), qc = w.squaredNorm() - 1.0;
    const double disc = qb * qb - qa * qc;
    if (disc < 0) return {1.0, 0.0};
    const double s = std::sqrt(disc);
    return {(-qb - s) / qa, (-qb + s) / qa};
  }
  if (std::holds_alternative<ConstClamp>(n)) return {-kInf, kInf};
  double lo = -kInf, hi = kInf;
  for (const auto& ch : std::get<MinOf>(n).children) {
    auto [a, b] = line_interval(ch, x, k);
    lo = std::max(lo, a);
    hi = std::min(hi, b);
  }
  return {lo, hi};
}

void collect_breaks(const LogConcaveFn& f, int k, std::vector<double>& out) {
  const auto& n = f.node();
  if (auto* e = std::get_if<EllipsoidalFunction>(&n)) {
    Box b = e->bounding_box();
    out.push_back(b.lo(k));
    out.push_back(e->c(k));
    out.push_back(b.hi(k));
  } else if (auto* m = std::get_if<MinOf>(&n)) {
    for (const auto& ch : m->children) collect_breaks(ch, k, out);
  } else if (auto bx = f.box()) {
    out.push_back(bx->lo(k));
    out.push_back(bx->hi(k));
  }
}

}  // namespace

double h_ball(const Vec& x) {
  const double r2 = x.squaredNorm();
  return r2 <= 1.0 ? std::sqrt(1.0 - r2) : 0.0;
}

double h_integral(int d) {
  if (d < 1) throw std::invalid_argument("h_integral: d must be >= 1");
  return unit_ball_volume(d + 1) / 2.0;
}

EllipsoidalFunction::EllipsoidalFunction(double alpha_, Mat A_, Vec c_)
    : alpha(alpha_), A(std::move(A_)), c(std::move(c_)) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw PreconditionError("ellipsoidal function: height must be positive");
  if (A.rows() != A.cols() || A.rows() != c.size()) throw PreconditionError("ellipsoidal function: shape mismatch");
  if (!(std::abs(A.determinant()) > 1e-12)) throw PreconditionError("ellipsoidal function: singular map");
}

EllipsoidalFunction EllipsoidalFunction::standard(int d) {
  return EllipsoidalFunction(1.0, Mat::Identity(d, d), Vec::Zero(d));
}

double EllipsoidalFunction::operator()(const Vec& x) const { return alpha * h_ball(A * (x - c)); }

double EllipsoidalFunction::integral() const { return alpha / std::abs(A.determinant()) * h_integral(dim()); }

Mat EllipsoidalFunction::base_generator() const {
  Mat G = (A.transpose() * A).inverse();
  G = 0.5 * (G + G.transpose());
  return G.llt().matrixL();
}

Box EllipsoidalFunction::bounding_box() const {
  Mat G = (A.transpose() * A).inverse();
  Vec hw = G.diagonal().cwiseMax(0.0).cwiseSqrt();
  return Box{c - hw, c + hw};
}

EllipsoidalFunction EllipsoidalFunction::position(double s, const Mat& T, const Vec& t) const {
  Mat AT = A * T;
  Vec center = T.fullPivLu().solve(c - t);
  return EllipsoidalFunction(s * alpha, AT, center);
}

EllipsoidalFunction EllipsoidalFunction::translated(const Vec& a) const { return EllipsoidalFunction(alpha, A, c - a); }

LogConcaveFn::LogConcaveFn(PolyLogLinear f) {
  if (f.slopes.empty() || f.slopes.size() != f.intercepts.size())
    throw PreconditionError("polyloglinear: need matching, nonempty slopes and intercepts");
  for (const auto& s : f.slopes) require_dim(static_cast<int>(s.size()), f.domain.dim(), "polyloglinear slope");
  if (!f.domain.feasible()) throw PreconditionError("polyloglinear: empty domain");
  node_ = std::make_shared<const Node>(std::move(f));
  dim_ = node_dim(*node_);
}

LogConcaveFn::LogConcaveFn(EllipsoidalFunction f) {
  node_ = std::make_shared<const Node>(std::move(f));
  dim_ = node_dim(*node_);
}

LogConcaveFn::LogConcaveFn(ConstClamp f) {
  if (!(f.level > 0.0)) throw PreconditionError("constant: level must be positive");
  if (f.d < 1) throw PreconditionError("constant: dimension must be >= 1");
  node_ = std::make_shared<const Node>(f);
  dim_ = f.d;
}

LogConcaveFn::LogConcaveFn(MinOf f) {
  if (f.children.size() < 2) throw PreconditionError("min: need at least two children");
  for (const auto& ch : f.children) require_dim(ch.dim(), f.children.front().dim(), "min child");
  node_ = std::make_shared<const Node>(std::move(f));
  dim_ = node_dim(*node_);
}

double LogConcaveFn::operator()(const Vec& x) const {
  require_dim(static_cast<int>(x.size()), dim_, "eval");
  const Node& n = *node_;
  if (auto* p = std::get_if<PolyLogLinear>(&n)) {
    if (!p->domain.contains(x, 1e-12)) return 0.0;
    double m = -kInf;
    for (std::size_t j = 0; j < p->slopes.size(); ++j) m = std::max(m, p->slopes[j].dot(x) + p->intercepts[j]);
    return std::exp(-m);
  }
  if (auto* e = std::get_if<EllipsoidalFunction>(&n)) return (*e)(x);
  if (auto* c = std::get_if<ConstClamp>(&n)) return c->level;
  double v = kInf;
  for (const auto& ch : std::get<MinOf>(n).children) {
    v = std::min(v, ch(x));
    if (v == 0.0) break;
  }
  return v;
}

std::optional<Box> LogConcaveFn::box() const {
  if (declared_) return declared_;
  return derive_box(*node_);
}

bool LogConcaveFn::bounded_support() const { return derive_box(*node_).has_value(); }

LogConcaveFn LogConcaveFn::with_box(const Vec& lo, const Vec& hi) const {
  require_dim(static_cast<int>(lo.size()), dim_, "box");
  require_dim(static_cast<int>(hi.size()), dim_, "box");
  if ((hi - lo).minCoeff() <= 0.0) throw PreconditionError("box: empty");
  LogConcaveFn out = *this;
  out.declared_ = Box{lo, hi};
  return out;
}

LogConcaveFn constant_on(const HPolytope& P, double level) {
  const int d = P.dim();
  return PolyLogLinear{{Vec::Zero(d)}, {-std::log(level)}, P};
}

LogConcaveFn pointwise_min(const std::vector<LogConcaveFn>& fs) {
  if (fs.empty()) throw PreconditionError("pointwise_min: empty list");
  MinOf m;
  for (const auto& f : fs) {
    require_dim(f.dim(), fs.front().dim(), "pointwise_min");
    const auto* inner = std::get_if<MinOf>(&f.node());
    if (inner && !f.box_declared())
      m.children.insert(m.children.end(), inner->children.begin(), inner->children.end());
    else
      m.children.push_back(f);
  }
  if (m.children.size() == 1) return m.children.front();
  return m;
}

LogConcaveFn pullback(const LogConcaveFn& f, double s, const Mat& T, const Vec& t) {
  if (!(s > 0.0)) throw PreconditionError("pullback: scale must be positive");
  const auto& n = f.node();
  std::optional<LogConcaveFn> out;
  if (auto* p = std::get_if<PolyLogLinear>(&n)) {
    PolyLogLinear q;
    for (std::size_t j = 0; j < p->slopes.size(); ++j) {
      q.slopes.push_back(T.transpose() * p->slopes[j]);
      q.intercepts.push_back(p->slopes[j].dot(t) + p->intercepts[j] - std::log(s));
    }
    q.domain = HPolytope(p->domain.A() * T, p->domain.b() - p->domain.A() * t);
    out = LogConcaveFn(std::move(q));
  } else if (auto* e = std::get_if<EllipsoidalFunction>(&n)) {
    out = LogConcaveFn(e->position(s, T, t));
  } else if (auto* c = std::get_if<ConstClamp>(&n)) {
    out = LogConcaveFn(ConstClamp{c->d, s * c->level});
  } else {
    MinOf m;
    for (const auto& ch : std::get<MinOf>(n).children) m.children.push_back(pullback(ch, s, T, t));
    out = LogConcaveFn(std::move(m));
  }
  if (f.box_declared()) {
    const Box b = *f.box();
    const int d = f.dim();
    Mat Ti = T.inverse();
    Vec lo = Vec::Constant(d, kInf), hi = Vec::Constant(d, -kInf);
    for (int mask = 0; mask < (1 << d); ++mask) {
      Vec y(d);
      for (int k = 0; k < d; ++k) y(k) = (mask >> k & 1) ? b.hi(k) : b.lo(k);
      Vec x = Ti * (y - t);
      lo = lo.cwiseMin(x);
      hi = hi.cwiseMax(x);
    }
    out = out->with_box(lo, hi);
  }
  return *out;
}

IntegralResult integrate(const LogConcaveFn& f, double tol) {
  const int d = f.dim();
  if (auto* e = f.as_ellipsoidal(); e && !f.box_declared()) return {e->integral(), 0.0, true, false};
  if (d > 3) throw UnsupportedDimension(d, 3);
  auto box = f.box();
  if (!box) throw PreconditionError("integrate: no bounding box for a function with unbounded support");
  const Box b = *box;
  if ((b.hi - b.lo).minCoeff() <= 0.0) return {0.0, 0.0, true, false};

  std::vector<std::vector<double>> breaks(d);
  for (int k = 0; k < d; ++k) collect_breaks(f, k, breaks[k]);

  double outer_width = 1.0;
  for (int k = 0; k + 1 < d; ++k) outer_width *= b.hi(k) - b.lo(k);
  const double inner_tol = tol / (4.0 * outer_width);
  bool inner_ok = true;
  Vec x(d);

  std::function<double(int)> level = [&](int k) -> double {
    double lo = b.lo(k), hi = b.hi(k);
    if (k == d - 1) {
      auto [a, c] = line_interval(f, x, k);
      lo = std::max(lo, a);
      hi = std::min(hi, c);
    }
    if (!(hi > lo)) return 0.0;
    auto integrand = [&](double t) {
      x(k) = t;
      return k == d - 1 ? f(x) : level(k + 1);
    };
    auto r = integrate_1d(integrand, lo, hi, breaks[k], inner_tol, 1e-12, 20000);
    if (!r.converged) inner_ok = false;
    return r.value;
  };

  // Outermost level run separately to keep its error estimate.
  auto integrand0 = [&](double t) {
    x(0) = t;
    return d == 1 ? f(x) : level(1);
  };
  double lo0 = b.lo(0), hi0 = b.hi(0);
  if (d == 1) {
    auto [a, c] = line_interval(f, x, 0);
    lo0 = std::max(lo0, a);
    hi0 = std::min(hi0, c);
  }
  IntegralResult out;
  if (hi0 > lo0) {
    auto r = integrate_1d(integrand0, lo0, hi0, breaks[0], tol / 2, 0.0, d == 1 ? 200000 : 20000);
    out.value = r.value;
    out.error = r.error + (d > 1 ? inner_tol * outer_width : 0.0);
    out.converged = r.converged && inner_ok && out.error <= tol;
  }
  if (f.box_declared()) {
    for (const auto& p : box_grid(b, 2000)) {
      bool on_face = false;
      for (int k = 0; k < d; ++k) on_face = on_face || p(k) == b.lo(k) || p(k) == b.hi(k);
      if (on_face && f(p) > 0.0) {
        out.truncated = true;
        break;
      }
    }
  }
  return out;
}

Vec clamp_contact(const Vec& u) {
  const double r = u.norm();
  return r > kContactClamp ? Vec(u * (kContactClamp / r)) : u;
}

LogConcaveFn ell_u(const Vec& u) {
  const int d = static_cast<int>(u.size());
  const double r2 = u.squaredNorm();
  if (std::sqrt(r2) > kContactClamp * (1.0 + 1e-15))
    throw PreconditionError("ell_u: |u| >= 1 - 1e-9; clamp unit-norm contacts with clamp_contact");
  const double h2 = 1.0 - r2;
  Vec s = u / h2;
  return PolyLogLinear{{s}, {-0.5 * std::log(h2) - s.dot(u)}, HPolytope::whole_space(d)};
}

std::vector<Vec> box_grid(const Box& b, int n) {
  const int d = b.dim();
  const int m = std::max(2, static_cast<int>(std::lround(std::pow(static_cast<double>(n), 1.0 / d))));
  std::vector<Vec> out;
  std::vector<int> idx(d, 0);
  while (true) {
    Vec x(d);
    for (int k = 0; k < d; ++k) x(k) = b.lo(k) + (b.hi(k) - b.lo(k)) * idx[k] / (m - 1);
    out.push_back(x);
    int k = 0;
    while (k < d && ++idx[k] == m) idx[k++] = 0;
    if (k == d) break;
  }
  return out;
}

double max_excess(const LogConcaveFn& g, const LogConcaveFn& f, const Box& b, int n) {
  double m = -kInf;
  for (const auto& x : box_grid(b, n)) m = std::max(m, g(x) - f(x));
  return m;
}

bool check_loglinear_majorant(const LogConcaveFn& f, const Vec& u, const Box& b) {
  require_dim(static_cast<int>(u.size()), f.dim(), "majorant");
  if (std::abs(f(u) - h_ball(u)) > 1e-7) throw PreconditionError("majorant: f does not touch h_ball at u");
  auto grid = box_grid(b, 10000);
  for (const auto& x : grid)
    if (f(x) < h_ball(x) - 1e-7) throw PreconditionError("majorant: f is below h_ball on the grid");
  auto ell = ell_u(u);
  for (const auto& x : grid)
    if (f(x) > ell(x) + 1e-7) return false;
  return true;
}

TailCheck tail_bound_check(const VPolytope& P, const Vec& x) {
  const int d = P.dim();
  require_dim(static_cast<int>(x.size()), d, "tail check");
  double rmax = 0.0;
  for (const auto& u : P.points()) rmax = std::max(rmax, u.norm());
  if (rmax > 1.0 + 1e-12) throw PreconditionError("tail check: P is not inside the unit ball");
  auto in = inball_radius_centered(P);
  if (!in.origin_inside || !(in.radius > 0.0)) throw PreconditionError("tail check: origin not interior to P");
  TailCheck t;
  t.delta = std::min(in.radius, 1.0);
  const double gauge = gauge_norm(x, polar(P));
  if (gauge < 1.0 - 1e-12) throw PreconditionError("tail check: x lies inside the polar of P");
  t.lhs = kInf;
  for (const auto& u : P.points()) t.lhs = std::min(t.lhs, ell_u(clamp_contact(u))(x));
  t.rhs = std::exp(1.0 - gauge);
  return t;
}

LogBound tail_integral_bound(double delta, int d) {
  if (!(delta > 0.0 && delta < 1.0)) throw PreconditionError("tail bound: delta must lie in (0,1)");
  return LogBound::from_log(std::log(2.0) + 1.0 + (d + 1) * std::log(static_cast<double>(d)) - d * std::log(delta) +
                            std::log(h_integral(d)));
}

}  // namespace helly
