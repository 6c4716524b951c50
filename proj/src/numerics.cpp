#include "helly/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

namespace helly {

Vec nnls(const Mat& A, const Vec& b, int max_iter) {
  const Eigen::Index n = A.cols();
  if (max_iter <= 0) max_iter = static_cast<int>(30 * (n + 1));
  Vec x = Vec::Zero(n);
  std::vector<bool> passive(static_cast<std::size_t>(n), false);
  const double tol = 1e-12 * std::max(1.0, A.cwiseAbs().maxCoeff()) * std::max(1.0, b.norm());

  auto solve_passive = [&](Vec& z) {
    std::vector<Eigen::Index> P;
    for (Eigen::Index j = 0; j < n; ++j)
      if (passive[static_cast<std::size_t>(j)]) P.push_back(j);
    z = Vec::Zero(n);
    if (P.empty()) return;
    Mat Ap(A.rows(), static_cast<Eigen::Index>(P.size()));
    for (std::size_t k = 0; k < P.size(); ++k) Ap.col(static_cast<Eigen::Index>(k)) = A.col(P[k]);
    Vec zp = Ap.completeOrthogonalDecomposition().solve(b);
    for (std::size_t k = 0; k < P.size(); ++k) z(P[k]) = zp(static_cast<Eigen::Index>(k));
  };

  for (int outer = 0; outer < max_iter; ++outer) {
    Vec w = A.transpose() * (b - A * x);
    Eigen::Index t = -1;
    double best = tol;
    for (Eigen::Index j = 0; j < n; ++j)
      if (!passive[static_cast<std::size_t>(j)] && w(j) > best) {
        best = w(j);
        t = j;
      }
    if (t < 0) break;
    passive[static_cast<std::size_t>(t)] = true;
    for (int inner = 0; inner < max_iter; ++inner) {
      Vec z;
      solve_passive(z);
      bool ok = true;
      for (Eigen::Index j = 0; j < n; ++j)
        if (passive[static_cast<std::size_t>(j)] && z(j) <= 0) ok = false;
      if (ok) {
        x = z;
        break;
      }
      double alpha = 1.0;
      for (Eigen::Index j = 0; j < n; ++j)
        if (passive[static_cast<std::size_t>(j)] && z(j) <= 0) alpha = std::min(alpha, x(j) / (x(j) - z(j)));
      x += alpha * (z - x);
      for (Eigen::Index j = 0; j < n; ++j)
        if (passive[static_cast<std::size_t>(j)] && x(j) <= 1e-15) {
          passive[static_cast<std::size_t>(j)] = false;
          x(j) = 0.0;
        }
    }
  }
  return x;
}

ScalarOpt golden_max(const std::function<double(double)>& f, double lo, double hi, double xtol) {
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double x1 = b - r * (b - a), x2 = a + r * (b - a);
  double f1 = f(x1), f2 = f(x2);
  const double scale = std::max(1.0, std::max(std::abs(lo), std::abs(hi)));
  for (int it = 0; it < 200 && (b - a) > xtol * scale; ++it) {
    if (f1 >= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - r * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + r * (b - a);
      f2 = f(x2);
    }
  }
  ScalarOpt out;
  if (f1 >= f2) {
    out.x = x1;
    out.value = f1;
  } else {
    out.x = x2;
    out.value = f2;
  }
  // Endpoints can win for monotone functions.
  for (double e : {lo, hi}) {
    double fe = f(e);
    if (fe > out.value) {
      out.x = e;
      out.value = fe;
    }
  }
  return out;
}

namespace {

NelderMeadResult nm_run(const std::function<double(const Vec&)>& f, const Vec& x0, double step,
                        const NelderMeadOptions& opt, int budget) {
  const Eigen::Index n = x0.size();
  std::vector<Vec> s(static_cast<std::size_t>(n + 1), x0);
  std::vector<double> fv(static_cast<std::size_t>(n + 1));
  for (Eigen::Index i = 0; i < n; ++i) s[static_cast<std::size_t>(i + 1)](i) += step;
  int evals = 0;
  auto F = [&](const Vec& x) {
    ++evals;
    double v = f(x);
    return std::isnan(v) ? -std::numeric_limits<double>::infinity() : v;
  };
  for (std::size_t i = 0; i < s.size(); ++i) fv[i] = F(s[i]);
  std::vector<std::size_t> order(s.size());
  while (evals < budget) {
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return fv[a] > fv[b] || (fv[a] == fv[b] && a < b);
    });
    std::vector<Vec> s2;
    std::vector<double> f2;
    for (auto i : order) {
      s2.push_back(s[i]);
      f2.push_back(fv[i]);
    }
    s.swap(s2);
    fv.swap(f2);
    double spread = 0.0;
    for (std::size_t i = 1; i < s.size(); ++i) spread = std::max(spread, (s[i] - s[0]).cwiseAbs().maxCoeff());
    if (std::isfinite(fv.back()) && std::abs(fv[0] - fv.back()) <= opt.ftol * (1.0 + std::abs(fv[0])) &&
        spread <= opt.xtol)
      break;
    if (spread <= 1e-15) break;
    Vec centroid = Vec::Zero(n);
    for (Eigen::Index i = 0; i < n; ++i) centroid += s[static_cast<std::size_t>(i)];
    centroid /= static_cast<double>(n);
    const Vec& worst = s.back();
    Vec xr = centroid + (centroid - worst);
    double fr = F(xr);
    if (fr > fv[0]) {
      Vec xe = centroid + 2.0 * (centroid - worst);
      double fe = F(xe);
      if (fe > fr) {
        s.back() = xe;
        fv.back() = fe;
      } else {
        s.back() = xr;
        fv.back() = fr;
      }
    } else if (fr > fv[static_cast<std::size_t>(n - 1)]) {
      s.back() = xr;
      fv.back() = fr;
    } else {
      Vec xc = fr > fv.back() ? Vec(centroid + 0.5 * (xr - centroid)) : Vec(centroid + 0.5 * (worst - centroid));
      double fc = F(xc);
      if (fc > std::max(fr, fv.back())) {
        s.back() = xc;
        fv.back() = fc;
      } else {
        for (std::size_t i = 1; i < s.size(); ++i) {
          s[i] = s[0] + 0.5 * (s[i] - s[0]);
          fv[i] = F(s[i]);
        }
      }
    }
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < s.size(); ++i)
    if (fv[i] > fv[best]) best = i;
  return {s[best], fv[best], evals};
}

}  // namespace

NelderMeadResult nelder_mead_max(const std::function<double(const Vec&)>& f, const Vec& x0,
                                 const NelderMeadOptions& opt) {
  NelderMeadResult best{x0, f(x0), 1};
  double step = opt.initial_step;
  int total = 1;
  for (int restart = 0; restart < 20 && total < opt.max_evals; ++restart) {
    auto r = nm_run(f, best.x, step, opt, opt.max_evals - total);
    total += r.evals;
    bool improved = r.value > best.value + opt.ftol * (1.0 + std::abs(best.value));
    if (r.value > best.value) {
      best.x = r.x;
      best.value = r.value;
    }
    if (!improved && restart > 0) break;
    step = std::max(step * 0.3, 1e-6);
  }
  best.evals = total;
  return best;
}

namespace {

const double kXgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                        0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                        0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                        0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
const double kWgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                        0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                        0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                        0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
const double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                       0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Piece {
  double a, b, value, error;
  bool operator<(const Piece& o) const { return error < o.error; }
};

Piece gk15(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double fc = f(c);
  double rk = fc * kWgk[7], rg = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    double x = h * kXgk[j];
    double s = f(c - x) + f(c + x);
    rk += kWgk[j] * s;
    if (j % 2 == 1) rg += kWg[j / 2] * s;
  }
  return {a, b, rk * h, std::abs((rk - rg) * h)};
}

}  // namespace

QuadResult integrate_1d(const std::function<double(double)>& f, double a, double b,
                        const std::vector<double>& breaks, double abs_tol, double rel_tol, int max_evals) {
  QuadResult out;
  if (!(b > a)) return out;
  std::vector<double> pts{a};
  std::vector<double> sorted = breaks;
  std::sort(sorted.begin(), sorted.end());
  for (double x : sorted)
    if (x > pts.back() + 1e-14 * std::max(1.0, std::abs(x)) && x < b) pts.push_back(x);
  pts.push_back(b);
  std::priority_queue<Piece> q;
  double total = 0.0, err = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    Piece p = gk15(f, pts[i], pts[i + 1]);
    out.evals += 15;
    total += p.value;
    err += p.error;
    q.push(p);
  }
  while (err > std::max(abs_tol, rel_tol * std::abs(total))) {
    if (out.evals >= max_evals) {
      out.converged = false;
      break;
    }
    Piece p = q.top();
    q.pop();
    double m = 0.5 * (p.a + p.b);
    if (m <= p.a || m >= p.b) {
      out.converged = false;
      break;
    }
    Piece l = gk15(f, p.a, m), r = gk15(f, m, p.b);
    out.evals += 30;
    total += l.value + r.value - p.value;
    err += l.error + r.error - p.error;
    q.push(l);
    q.push(r);
  }
  // Recompute sums to shed accumulated cancellation.
  total = 0.0;
  err = 0.0;
  while (!q.empty()) {
    total += q.top().value;
    err += q.top().error;
    q.pop();
  }
  out.value = total;
  out.error = err;
  return out;
}

}  // namespace helly
