#include "helly/john_function.hpp"

#include "helly/errors.hpp"
#include "helly/numerics.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <algorithm>
#include <cmath>
#include <limits>

namespace helly {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct RawContact {
  Vec y;
  double log_value = 0.0;  // height constraints
  double slack = 0.0;      // support constraints
  bool support = false;
};

// Trust-region minimization with H = Q diag(lam) Q^T given.
TrustRegionResult trs_eig(const Vec& lam, const Mat& Q, const Vec& g, double k) {
  const int d = static_cast<int>(lam.size());
  Vec gt = Q.transpose() * g;
  auto value_of = [&](const Vec& y) {
    Vec yt = Q.transpose() * y;
    return (yt.array().square() * lam.array()).sum() + 2.0 * g.dot(y) + k;
  };
  const double lmin = lam.minCoeff();
  const double scale = std::max({1.0, lam.cwiseAbs().maxCoeff(), g.norm()});
  if (lmin > 1e-14 * scale) {
    Vec yt = -gt.cwiseQuotient(lam);
    if (yt.norm() <= 1.0) {
      Vec y = Q * yt;
      return {value_of(y), y};
    }
  }
  const double mu_lo = std::max(0.0, -lmin);
  auto norm_at = [&](double mu) {
    double s = 0.0;
    for (int i = 0; i < d; ++i) {
      const double den = lam(i) + mu;
      if (den <= 1e-14 * scale) {
        if (std::abs(gt(i)) > 1e-14 * scale) return kInf;
        continue;
      }
      s += gt(i) * gt(i) / (den * den);
    }
    return std::sqrt(s);
  };
  Vec yt(d);
  if (norm_at(mu_lo) <= 1.0) {
    // Hard case: fill the remaining length along the null directions.
    int jmin = 0;
    for (int i = 0; i < d; ++i) {
      const double den = lam(i) + mu_lo;
      if (den <= 1e-14 * scale) {
        yt(i) = 0.0;
        jmin = i;
      } else {
        yt(i) = -gt(i) / den;
      }
    }
    yt(jmin) = std::sqrt(std::max(0.0, 1.0 - yt.squaredNorm()));
  } else {
    double lo = mu_lo, hi = mu_lo + g.norm() + 1.0;
    for (int it = 0; it < 200 && hi - lo > 1e-16 * std::max(1.0, hi); ++it) {
      const double mid = 0.5 * (lo + hi);
      (norm_at(mid) > 1.0 ? lo : hi) = mid;
    }
    for (int i = 0; i < d; ++i) yt(i) = -gt(i) / (lam(i) + hi);
    yt /= std::max(1.0, yt.norm());
  }
  Vec y = Q * yt;
  return {value_of(y), y};
}

double height_rec(const LogConcaveFn& f, const Mat& L, const Vec& c, std::vector<RawContact>* out) {
  const auto& n = f.node();
  if (auto* k = std::get_if<ConstClamp>(&n)) {
    if (out) out->push_back({Vec::Zero(c.size()), std::log(k->level), 0.0, false});
    return std::log(k->level);
  }
  if (auto* p = std::get_if<PolyLogLinear>(&n)) {
    const Mat& A = p->domain.A();
    const Vec& b = p->domain.b();
    for (int i = 0; i < A.rows(); ++i) {
      Vec w = L.transpose() * A.row(i).transpose();
      const double ext = w.norm();
      if (ext == 0.0) continue;
      const double slack = (b(i) - A.row(i).dot(c) - ext) / ext;
      if (slack < -1e-12) return -kInf;
      if (out) out->push_back({w / ext, 0.0, std::max(0.0, slack), true});
    }
    double best = kInf;
    for (std::size_t j = 0; j < p->slopes.size(); ++j) {
      Vec w = L.transpose() * p->slopes[j];
      const double beta = w.norm();
      const double r = 2.0 * beta / (1.0 + std::sqrt(1.0 + 4.0 * beta * beta));
      const double v = -p->slopes[j].dot(c) - p->intercepts[j] - beta * r - 0.5 * std::log1p(-r * r);
      best = std::min(best, v);
      if (out) out->push_back({beta > 0 ? Vec(w * (r / beta)) : Vec::Zero(c.size()), v, 0.0, false});
    }
    return best;
  }
  if (auto* e = std::get_if<EllipsoidalFunction>(&n)) {
    // r = (t/alpha)^2 is feasible iff 1 - |Gy+h|^2 >= r (1 - |y|^2) on the
    // ball. By the S-lemma the largest such r is the largest s with
    // N - s D positive semidefinite, D = diag(-I, 1).
    const int d = static_cast<int>(c.size());
    Mat G = e->A * L;
    Vec h = e->A * (c - e->c);
    Mat N(d + 1, d + 1);
    N.topLeftCorner(d, d) = -G.transpose() * G;
    N.topRightCorner(d, 1) = -G.transpose() * h;
    N.bottomLeftCorner(1, d) = N.topRightCorner(d, 1).transpose();
    N(d, d) = 1.0 - h.squaredNorm();
    const double scale = 1.0 + N.norm();
    double r = -1.0;
    if (d == 1) {
      // det(N - sD) = 0 is a quadratic in s; at a root the 2x2 matrix is
      // PSD iff both diagonal entries are nonnegative.
      const double n11 = N(0, 0), n12 = N(0, 1), n22 = N(1, 1);
      const double disc = (n11 + n22) * (n11 + n22) - 4.0 * n12 * n12;
      // Same acceptance as an imaginary part of at most 1e-9 * scale.
      if (disc >= -4e-18 * scale * scale) {
        const double q = std::sqrt(std::max(0.0, disc));
        for (double s : {0.5 * (n22 - n11 + q), 0.5 * (n22 - n11 - q)}) {
          const double tol = -1e-10 * (scale + std::abs(s));
          if (n11 + s >= tol && n22 - s >= tol) {
            r = s;
            break;
          }
        }
      }
    } else {
      Mat D = Mat::Identity(d + 1, d + 1) * -1.0;
      D(d, d) = 1.0;
      Eigen::EigenSolver<Mat> es(D * N, false);
      std::vector<double> roots;
      for (int i = 0; i <= d; ++i)
        if (std::abs(es.eigenvalues()(i).imag()) <= 1e-9 * scale) roots.push_back(es.eigenvalues()(i).real());
      std::sort(roots.rbegin(), roots.rend());
      for (double s : roots) {
        Eigen::SelfAdjointEigenSolver<Mat> ps(N - s * D, Eigen::EigenvaluesOnly);
        if (ps.eigenvalues()(0) >= -1e-10 * (scale + std::abs(s))) {
          r = s;
          break;
        }
      }
    }
    if (!(r > 0.0)) return -kInf;
    r = std::min(r, N(d, d));
    const double v = std::log(e->alpha) + 0.5 * std::log(r);
    if (out) {
      // Containment slack of the base ellipsoid in the child's base.
      auto far = trust_region_min(-G.transpose() * G, -G.transpose() * h, -h.squaredNorm());
      const double reach = std::sqrt(std::max(0.0, -far.value));
      out->push_back({far.y, 0.0, std::max(0.0, 1.0 - reach), true});
      Mat H = r * Mat::Identity(d, d) - G.transpose() * G;
      out->push_back({trust_region_min(H, -G.transpose() * h, N(d, d) - r).y, v, 0.0, false});
    }
    return v;
  }
  double best = kInf;
  for (const auto& ch : std::get<MinOf>(n).children) {
    best = std::min(best, height_rec(ch, L, c, out));
    if (best == -kInf && !out) return best;
  }
  return best;
}

struct Frame {
  Vec mid, hw;
  int d;
  int nparams() const { return d == 1 ? 2 : 5; }
  void unpack(const Vec& p, Mat& L, Vec& c) const {
    c = mid + hw.cwiseProduct(p.head(d));
    Mat Lt = Mat::Zero(d, d);
    if (d == 1) {
      Lt(0, 0) = std::exp(p(1));
    } else {
      Lt(0, 0) = std::exp(p(2));
      Lt(1, 0) = p(3);
      Lt(1, 1) = std::exp(p(4));
    }
    L = hw.asDiagonal() * Lt;
  }
  Vec pack(const Mat& L, const Vec& c) const {
    Vec p(nparams());
    p.head(d) = (c - mid).cwiseQuotient(hw);
    Mat Lt = hw.cwiseInverse().asDiagonal() * L;
    // Re-triangularize: the ellipsoid depends only on Lt Lt^T.
    Mat M = Lt * Lt.transpose();
    Mat C = M.llt().matrixL();
    if (d == 1) {
      p(1) = std::log(C(0, 0));
    } else {
      p(2) = std::log(C(0, 0));
      p(3) = C(1, 0);
      p(4) = std::log(C(1, 1));
    }
    return p;
  }
};

std::vector<Vec> ball_grid(int d) {
  std::vector<Vec> pts;
  if (d == 1) {
    for (int i = -1000; i <= 1000; ++i) pts.push_back(Vec::Constant(1, i / 1000.0));
    return pts;
  }
  pts.push_back(Vec::Zero(2));
  for (int k = 1; k <= 40; ++k) {
    const double r = k / 40.0;
    const int m = k == 40 ? 192 : 96;
    for (int j = 0; j < m; ++j) {
      const double t = 2.0 * M_PI * j / m;
      Vec v(2);
      v << r * std::cos(t), r * std::sin(t);
      pts.push_back(v);
    }
  }
  return pts;
}

}  // namespace

TrustRegionResult trust_region_min(const Mat& H, const Vec& g, double k) {
  if (H.rows() == 1) {
    const double a = H(0, 0), b = g(0);
    TrustRegionResult out{a + 2.0 * b + k, Vec::Constant(1, 1.0)};
    if (const double v = a - 2.0 * b + k; v < out.value) out = {v, Vec::Constant(1, -1.0)};
    if (a > 0.0 && std::abs(b) < a) {
      const double y = -b / a;
      if (const double v = k - b * b / a; v < out.value) out = {v, Vec::Constant(1, y)};
    }
    return out;
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (H + H.transpose()));
  return trs_eig(es.eigenvalues(), es.eigenvectors(), g, k);
}

double max_feasible_log_height(const LogConcaveFn& f, const Mat& L, const Vec& c, std::vector<HeightContact>* contacts) {
  if (!contacts) return height_rec(f, L, c, nullptr);
  std::vector<RawContact> raw;
  const double v = height_rec(f, L, c, &raw);
  contacts->clear();
  if (v == -kInf) return v;
  for (const auto& r : raw) contacts->push_back({r.y, r.support ? r.slack : r.log_value - v});
  return v;
}

ContactDecomposition fit_contact_weights(const std::vector<Vec>& pts) {
  ContactDecomposition out;
  if (pts.empty()) {
    out.identity = out.height = 1.0;
    return out;
  }
  const int d = static_cast<int>(pts.front().size());
  const int nsym = d * (d + 1) / 2;
  Mat A(nsym + 1 + d, static_cast<int>(pts.size()));
  Vec b = Vec::Zero(A.rows());
  for (std::size_t j = 0; j < pts.size(); ++j) {
    const Vec& u = pts[j];
    int r = 0;
    for (int a = 0; a < d; ++a)
      for (int bb = a; bb < d; ++bb) A(r++, static_cast<int>(j)) = u(a) * u(bb);
    A(r++, static_cast<int>(j)) = 1.0 - std::min(1.0, u.squaredNorm());
    for (int a = 0; a < d; ++a) A(r++, static_cast<int>(j)) = u(a);
  }
  {
    int r = 0;
    for (int a = 0; a < d; ++a)
      for (int bb = a; bb < d; ++bb) b(r++) = a == bb ? 1.0 : 0.0;
    b(r) = 1.0;
  }
  out.weights = nnls(A, b);
  Vec res = A * out.weights - b;
  Mat S = Mat::Zero(d, d);
  for (std::size_t j = 0; j < pts.size(); ++j) S += out.weights(static_cast<int>(j)) * pts[j] * pts[j].transpose();
  out.identity = (S - Mat::Identity(d, d)).norm();
  out.height = std::abs(res(nsym));
  out.centroid = res.tail(d).norm();
  return out;
}

JohnFunctionResult john_function(const LogConcaveFn& f, const JohnOptions& opt) {
  const int d = f.dim();
  if (d > 2) throw UnsupportedDimension(d, 2);
  auto box = f.box();
  if (!box) throw PreconditionError("john_function: f needs a bounded support or declared box");
  Frame fr{0.5 * (box->lo + box->hi), 0.5 * (box->hi - box->lo), d};
  if (fr.hw.minCoeff() <= 0.0) throw InfeasibleError("john_function: degenerate support box");

  Vec x0 = fr.mid;
  double fbest = f(x0);
  for (const auto& x : box_grid(*box, d == 1 ? 4001 : 4096))
    if (const double v = f(x); v > fbest) {
      fbest = v;
      x0 = x;
    }
  if (!(fbest > 0.0)) throw InfeasibleError("john_function: f vanishes on the search grid");

  auto objective = [&](const Vec& p) {
    Mat L;
    Vec c;
    fr.unpack(p, L, c);
    const double v = max_feasible_log_height(f, L, c);
    if (v == -kInf || !std::isfinite(v)) return -1e300;
    return v + std::log(std::abs(L.determinant()));
  };

  // Smoothed objective: soft minimum of the height terms plus a log barrier
  // on the support slacks, driven to the exact objective by continuation.
  auto smoothed = [&](const Vec& p, double mu) {
    Mat L;
    Vec c;
    fr.unpack(p, L, c);
    std::vector<RawContact> raw;
    if (height_rec(f, L, c, &raw) == -kInf) return -1e300;
    double lo = kInf;
    for (const auto& r : raw)
      if (!r.support) lo = std::min(lo, r.log_value);
    double sum = 0.0, barrier = 0.0;
    for (const auto& r : raw) {
      if (r.support) {
        if (r.slack <= 0.0) return -1e300;
        barrier += std::log(r.slack / (1.0 + r.slack));
      } else {
        sum += std::exp(-(r.log_value - lo) / mu);
      }
    }
    return std::log(std::abs(L.determinant())) + lo - mu * std::log(sum) + mu * barrier;
  };

  struct Start {
    Vec center;
    double frac;
  };
  std::vector<Start> starts{{x0, 0.5}, {fr.mid, 0.5}, {x0, 0.1}, {fr.mid, 0.9}};
  starts.resize(std::min<std::size_t>(starts.size(), static_cast<std::size_t>(std::max(1, opt.starts))));
  bool found = false;
  NelderMeadResult best;
  for (const auto& s : starts) {
    Mat L = fr.hw.asDiagonal() * s.frac;
    int tries = 0;
    while (max_feasible_log_height(f, L, s.center) == -kInf && tries++ < 80) L *= 0.7;
    if (tries > 80) continue;
    Vec p = fr.pack(L, s.center);
    double step = 0.2;
    for (double mu = 1e-1; mu > 1e-10; mu *= 0.1) {
      NelderMeadOptions nm;
      nm.max_evals = d == 1 ? 1500 : 4000;
      nm.initial_step = step;
      p = nelder_mead_max([&](const Vec& q) { return smoothed(q, mu); }, p, nm).x;
      step = std::max(step * 0.5, 1e-4);
    }
    NelderMeadOptions nm;
    nm.max_evals = d == 1 ? 2000 : 6000;
    nm.initial_step = 1e-4;
    auto r = nelder_mead_max(objective, p, nm);
    if (!found || r.value > best.value) {
      best = r;
      found = true;
    }
  }
  if (!found || best.value <= -1e299) throw InfeasibleError("john_function: no feasible ellipsoidal function found");

  Mat L;
  Vec c;
  fr.unpack(best.x, L, c);
  std::vector<HeightContact> hc;
  const double la = max_feasible_log_height(f, L, c, &hc);
  JohnFunctionResult out{EllipsoidalFunction(std::exp(la), L.inverse(), c), {}, Vec(), kInf, kInf, kInf, false};

  const double alpha = out.g.alpha;
  auto ft = [&](const Vec& z) { return f(L * z + c) / alpha; };
  const auto grid = ball_grid(d);
  std::vector<double> fgrid(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) fgrid[i] = ft(grid[i]);

  for (double thr : {1e-6, 1e-5, 1e-4, 1e-3}) {
    std::vector<Vec> pts;
    auto add = [&](const Vec& v) {
      for (const auto& p : pts)
        if ((p - v).norm() < 1e-9) return;
      pts.push_back(v);
    };
    for (const auto& h : hc)
      if (h.gap <= thr) add(h.y.norm() > 1.0 ? Vec(h.y.normalized()) : h.y);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const Vec& z = grid[i];
      const double hz = h_ball(z);
      if (hz > 0.0 ? fgrid[i] - hz <= thr * hz : ft(z * (1.0 + thr)) == 0.0) add(z);
    }
    auto fit = fit_contact_weights(pts);
    const double res = std::max({fit.identity, fit.height, fit.centroid});
    if (res < out.residual()) {
      out.contacts.clear();
      std::vector<double> w;
      for (std::size_t j = 0; j < pts.size(); ++j)
        if (fit.weights(static_cast<int>(j)) > 1e-12) {
          out.contacts.push_back(pts[j]);
          w.push_back(fit.weights(static_cast<int>(j)));
        }
      out.weights = Eigen::Map<Vec>(w.data(), static_cast<int>(w.size()));
      out.residual_identity = fit.identity;
      out.residual_height = fit.height;
      out.residual_centroid = fit.centroid;
    }
    if (res <= opt.certificate_tol) break;
  }
  out.certified = out.residual() <= opt.certificate_tol;
  return out;
}

double integral_ratio(const LogConcaveFn& f, const EllipsoidalFunction& g) {
  const double ig = g.integral();
  if (!(ig > 0.0)) throw PreconditionError("integral_ratio: John function has zero integral");
  return std::pow(integrate(f).value / ig, 1.0 / f.dim());
}

double translate_margin(const LogConcaveFn& f, const EllipsoidalFunction& g, const Vec& a) {
  const Mat L = g.A.inverse();
  return max_feasible_log_height(f, L, g.c - a) - std::log(g.alpha);
}

std::optional<Vec> find_translate_below(const LogConcaveFn& f, const EllipsoidalFunction& g, const Box& search) {
  const int d = f.dim();
  const Mat L = g.A.inverse();
  const double la = std::log(g.alpha);
  auto margin = [&](const Vec& a) {
    const double v = max_feasible_log_height(f, L, g.c - a) - la;
    return std::isfinite(v) ? v : -1e300;
  };
  Vec best = 0.5 * (search.lo + search.hi);
  double mbest = margin(best);
  for (const auto& a : box_grid(search, d == 1 ? 401 : 1681))
    if (const double m = margin(a); m > mbest) {
      mbest = m;
      best = a;
    }
  if (mbest <= -1e299) return std::nullopt;
  {
    NelderMeadOptions nm;
    nm.initial_step = 0.5 * (search.hi - search.lo).maxCoeff() / (d == 1 ? 400 : 40);
    auto clipped = [&](const Vec& a) {
      if ((a - search.lo).minCoeff() < 0.0 || (search.hi - a).minCoeff() < 0.0) return -1e300;
      return margin(a);
    };
    auto r = nelder_mead_max(clipped, best, nm);
    if (r.value > mbest) {
      mbest = r.value;
      best = r.x;
    }
  }
  if (mbest < -1e-12) return std::nullopt;
  const EllipsoidalFunction t = g.translated(best);
  if (max_excess(LogConcaveFn(t), f, t.bounding_box(), 10000) > 1e-9) return std::nullopt;
  return best;
}

}  // namespace helly
