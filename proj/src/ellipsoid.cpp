#include "helly/ellipsoid.hpp"

#include "helly/errors.hpp"
#include "helly/numerics.hpp"
#include "helly/sphere.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace helly {

double unit_ball_volume(int d) {
  return std::pow(M_PI, d / 2.0) / std::tgamma(d / 2.0 + 1.0);
}

Ellipsoid::Ellipsoid(Vec center, Mat shape) : center_(std::move(center)), shape_(std::move(shape)) {
  const Eigen::Index d = center_.size();
  if (shape_.rows() != d || shape_.cols() != d) throw std::invalid_argument("Ellipsoid: shape size mismatch");
  if ((shape_ - shape_.transpose()).cwiseAbs().maxCoeff() > 1e-10 * std::max(1.0, shape_.cwiseAbs().maxCoeff()))
    throw std::invalid_argument("Ellipsoid: shape not symmetric");
  shape_ = 0.5 * (shape_ + shape_.transpose());
  Eigen::SelfAdjointEigenSolver<Mat> es(shape_);
  if (es.eigenvalues().minCoeff() <= 0.0) throw std::invalid_argument("Ellipsoid: shape not positive definite");
}

Ellipsoid Ellipsoid::ball(int d, double radius) {
  return Ellipsoid(Vec::Zero(d), Mat::Identity(d, d) / (radius * radius));
}

Mat Ellipsoid::generator() const {
  Mat inv = shape_.inverse();
  inv = 0.5 * (inv + inv.transpose());
  return Eigen::LLT<Mat>(inv).matrixL();
}

double Ellipsoid::gauge(const Vec& x) const {
  Vec y = x - center_;
  return std::sqrt(std::max(0.0, y.dot(shape_ * y)));
}

bool Ellipsoid::contains(const Vec& x, double slack) const { return gauge(x) <= 1.0 + slack; }

double Ellipsoid::volume() const { return unit_ball_volume(dim()) / std::sqrt(shape_.determinant()); }

Ellipsoid Ellipsoid::image(const Mat& T, const Vec& t) const {
  Mat Ti = T.inverse();
  Mat M = Ti.transpose() * shape_ * Ti;
  return Ellipsoid(T * center_ + t, 0.5 * (M + M.transpose()));
}

bool ContactCertificate::well_formed(int d) const {
  if (points.size() != weights.size() || points.size() < static_cast<std::size_t>(d + 1)) return false;
  for (double w : weights)
    if (!(w > 0.0)) return false;
  return true;
}

namespace {

int affine_rank(const std::vector<Vec>& pts) {
  if (pts.size() < 2) return 0;
  const Eigen::Index d = pts.front().size();
  Mat M(d, static_cast<Eigen::Index>(pts.size()) - 1);
  for (std::size_t i = 1; i < pts.size(); ++i) M.col(static_cast<Eigen::Index>(i) - 1) = pts[i] - pts[0];
  Eigen::JacobiSVD<Mat> svd(M);
  const Vec& s = svd.singularValues();
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > 1e-10 * std::max(1.0, s(0))) ++r;
  return r;
}

}  // namespace

EllipsoidFit lowner_ellipsoid(const std::vector<Vec>& points) {
  if (points.empty()) throw std::invalid_argument("lowner_ellipsoid: no points");
  const int d = static_cast<int>(points.front().size());
  const int rank = affine_rank(points);
  if (rank < d) throw DegenerateSpanError(d - rank, d);
  const Eigen::Index n = static_cast<Eigen::Index>(points.size());

  Mat Q(d + 1, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    Q.col(i).head(d) = points[static_cast<std::size_t>(i)];
    Q(d, i) = 1.0;
  }
  Vec u = Vec::Constant(n, 1.0 / static_cast<double>(n));
  const double D = d + 1.0;
  const double eps = 1e-11;
  int it = 0;
  for (; it < 100000; ++it) {
    Mat X = Q * u.asDiagonal() * Q.transpose();
    Eigen::LLT<Mat> llt(X);
    Mat Y = llt.solve(Q);
    Vec g = (Q.cwiseProduct(Y)).colwise().sum().transpose();
    Eigen::Index j;
    double gmax = g.maxCoeff(&j);
    Eigen::Index k = -1;
    double gmin = 1e300;
    for (Eigen::Index i = 0; i < n; ++i)
      if (u(i) > 0.0 && g(i) < gmin) {
        gmin = g(i);
        k = i;
      }
    const double eplus = gmax / D - 1.0;
    const double eminus = 1.0 - gmin / D;
    if (eplus <= eps && eminus <= eps) break;
    if (eplus >= eminus) {
      const double beta = (gmax - D) / (D * (gmax - 1.0));
      u *= (1.0 - beta);
      u(j) += beta;
    } else {
      double beta = (gmin - D) / (D * (gmin - 1.0));  // negative
      const double drop = -u(k) / (1.0 - u(k));
      if (beta <= drop) beta = drop;
      u *= (1.0 - beta);
      u(k) += beta;
      if (u(k) < 1e-300) u(k) = 0.0;
    }
  }

  Vec c = Vec::Zero(d);
  for (Eigen::Index i = 0; i < n; ++i) c += u(i) * points[static_cast<std::size_t>(i)];
  Mat S = Mat::Zero(d, d);
  for (Eigen::Index i = 0; i < n; ++i) {
    Vec y = points[static_cast<std::size_t>(i)] - c;
    S += u(i) * y * y.transpose();
  }
  Mat M = S.inverse() / d;
  M = 0.5 * (M + M.transpose());
  double smax = 0.0;
  for (const auto& p : points) smax = std::max(smax, (p - c).dot(M * (p - c)));
  M /= smax;

  EllipsoidFit fit{Ellipsoid(c, M), {}, it};
  Mat Lt = Eigen::LLT<Mat>(M).matrixU();  // M = U'U, normalized y = U (x - c)
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(u(i) > 1e-12)) continue;
    Vec v = Lt * (points[static_cast<std::size_t>(i)] - c);
    if (std::abs(1.0 - v.norm()) <= 1e-6) {
      fit.certificate.points.push_back(v);
      fit.certificate.weights.push_back(d * u(i));
    }
  }
  return fit;
}

namespace {

// Barrier objective for the inscribed ellipsoid {c + L y : |y| <= 1} with L
// lower triangular. Variables z = (c, vec of lower(L) by column).
struct JohnBarrier {
  const Mat& A;
  const Vec& b;
  int d;
  int N;
  std::vector<std::pair<int, int>> lidx;  // (row j, col k) for each L entry

  JohnBarrier(const Mat& A_, const Vec& b_) : A(A_), b(b_), d(static_cast<int>(A_.cols())) {
    for (int k = 0; k < d; ++k)
      for (int j = k; j < d; ++j) lidx.emplace_back(j, k);
    N = d + static_cast<int>(lidx.size());
  }

  Mat L_of(const Vec& z) const {
    Mat L = Mat::Zero(d, d);
    for (std::size_t e = 0; e < lidx.size(); ++e) L(lidx[e].first, lidx[e].second) = z(d + static_cast<Eigen::Index>(e));
    return L;
  }

  // Slacks; returns false if any is nonpositive.
  bool slacks(const Vec& z, Vec& s) const {
    Mat L = L_of(z);
    for (int k = 0; k < d; ++k)
      if (!(L(k, k) > 0.0)) return false;
    Vec c = z.head(d);
    s.resize(A.rows());
    for (Eigen::Index i = 0; i < A.rows(); ++i) {
      Vec v = L.transpose() * A.row(i).transpose();
      s(i) = b(i) - A.row(i).dot(c) - v.norm();
      if (!(s(i) > 0.0)) return false;
    }
    return true;
  }

  double value(const Vec& z, double t) const {
    Vec s;
    if (!slacks(z, s)) return -std::numeric_limits<double>::infinity();
    Mat L = L_of(z);
    double f = 0.0;
    for (int k = 0; k < d; ++k) f += t * std::log(L(k, k));
    for (Eigen::Index i = 0; i < s.size(); ++i) f += std::log(s(i));
    return f;
  }

  void derivatives(const Vec& z, double t, Vec& g, Mat& H) const {
    Mat L = L_of(z);
    Vec c = z.head(d);
    g = Vec::Zero(N);
    H = Mat::Zero(N, N);
    for (std::size_t e = 0; e < lidx.size(); ++e) {
      if (lidx[e].first != lidx[e].second) continue;
      const double l = L(lidx[e].first, lidx[e].first);
      const Eigen::Index p = d + static_cast<Eigen::Index>(e);
      g(p) += t / l;
      H(p, p) -= t / (l * l);
    }
    Mat J = Mat::Zero(d, N);
    for (Eigen::Index i = 0; i < A.rows(); ++i) {
      Vec a = A.row(i).transpose();
      Vec v = L.transpose() * a;
      const double nv = v.norm();
      const double s = b(i) - a.dot(c) - nv;
      J.setZero();
      for (std::size_t e = 0; e < lidx.size(); ++e)
        J(lidx[e].second, d + static_cast<Eigen::Index>(e)) = a(lidx[e].first);
      Vec ds = -(J.transpose() * v) / nv;
      ds.head(d) -= a;
      Mat Hv = (Mat::Identity(d, d) - v * v.transpose() / (nv * nv)) / nv;
      Mat d2s = -J.transpose() * Hv * J;
      g += ds / s;
      H += d2s / s - ds * ds.transpose() / (s * s);
    }
  }
};

}  // namespace

EllipsoidFit john_ellipsoid(const HPolytope& P) {
  const int d = P.dim();
  auto cheb = chebyshev_ball(P);
  if (!cheb || cheb->radius <= 1e-12) throw PreconditionError("john_ellipsoid: polytope has empty interior");
  if (!bounded(P)) throw PreconditionError("john_ellipsoid: polytope is unbounded");

  // Work in coordinates where the Chebyshev ball is the unit ball.
  const double r0 = cheb->radius;
  const Vec c0 = cheb->center;
  Mat A = P.A();
  Vec b = (P.b() - A * c0) / r0;
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    double nrm = A.row(i).norm();
    A.row(i) /= nrm;
    b(i) /= nrm;
  }
  JohnBarrier jb(A, b);
  Vec z = Vec::Zero(jb.N);
  for (std::size_t e = 0; e < jb.lidx.size(); ++e)
    if (jb.lidx[e].first == jb.lidx[e].second) z(d + static_cast<Eigen::Index>(e)) = 0.5;

  int iters = 0;
  for (double t = 1.0; t <= 1e13; t *= 8.0) {
    for (int newton = 0; newton < 200; ++newton, ++iters) {
      Vec g;
      Mat H;
      jb.derivatives(z, t, g, H);
      Eigen::LDLT<Mat> ldlt(-H);
      Vec step = ldlt.solve(g);
      const double dec = g.dot(step);
      if (!(dec > 1e-20)) break;
      double f0 = jb.value(z, t);
      double alpha = 1.0;
      Vec zn;
      for (int ls = 0; ls < 60; ++ls) {
        zn = z + alpha * step;
        double fn = jb.value(zn, t);
        if (std::isfinite(fn) && fn >= f0 + 0.25 * alpha * dec) break;
        alpha *= 0.5;
      }
      if (!std::isfinite(jb.value(zn, t))) break;
      z = zn;
      if (dec < 1e-18) break;
    }
  }

  Mat L = jb.L_of(z);
  Vec c = z.head(d);
  // Normalized facets: w_i' y <= beta_i with |w_i| = 1, contact when beta_i ~ 1.
  std::vector<Vec> normals;
  std::vector<double> betas;
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    Vec v = L.transpose() * A.row(i).transpose();
    const double nv = v.norm();
    normals.push_back(v / nv);
    betas.push_back((b(i) - A.row(i).dot(c)) / nv);
  }

  EllipsoidFit fit{Ellipsoid(c0 + r0 * c, (r0 * r0 * L * L.transpose()).inverse()), {}, iters};
  for (double thr : {1e-6, 1e-5, 1e-4}) {
    std::vector<Vec> pts;
    for (std::size_t i = 0; i < normals.size(); ++i)
      if (betas[i] <= 1.0 + thr) {
        bool dup = false;
        for (const auto& q : pts)
          if ((q - normals[i]).norm() < 1e-9) dup = true;
        if (!dup) pts.push_back(normals[i]);
      }
    if (pts.empty()) continue;
    Mat M(d * d + d, static_cast<Eigen::Index>(pts.size()));
    for (std::size_t k = 0; k < pts.size(); ++k) {
      Mat uu = pts[k] * pts[k].transpose();
      M.col(static_cast<Eigen::Index>(k)) << Eigen::Map<Vec>(uu.data(), d * d), pts[k];
    }
    Vec target(d * d + d);
    Mat I = Mat::Identity(d, d);
    target << Eigen::Map<Vec>(I.data(), d * d), Vec::Zero(d);
    Vec w = nnls(M, target);
    ContactCertificate cert;
    for (std::size_t k = 0; k < pts.size(); ++k)
      if (w(static_cast<Eigen::Index>(k)) > 0.0) {
        cert.points.push_back(pts[k]);
        cert.weights.push_back(w(static_cast<Eigen::Index>(k)));
      }
    fit.certificate = cert;
    auto res = verify_decomposition(cert);
    if (res.identity < 1e-7 && res.centroid < 1e-7) break;
  }
  return fit;
}

DecompositionResidual verify_decomposition(const ContactCertificate& cert) {
  DecompositionResidual r;
  if (cert.points.empty()) return r;
  const Eigen::Index d = cert.points.front().size();
  Mat S = -Mat::Identity(d, d);
  Vec m = Vec::Zero(d);
  for (std::size_t i = 0; i < cert.points.size(); ++i) {
    S += cert.weights[i] * cert.points[i] * cert.points[i].transpose();
    m += cert.weights[i] * cert.points[i];
  }
  r.identity = S.norm();
  r.centroid = m.norm();
  return r;
}

bool check_lowner_inclusion(const VPolytope& K, const Ellipsoid& E, double tol) {
  const int d = E.dim();
  const Mat L = E.generator();
  const double scale = (1.0 - tol) / d;
  for (const auto& y : sphere_grid(d, 100 * d)) {
    Vec x = E.center() + scale * (L * y);
    if (!in_hull(K, x, 1e-12)) return false;
  }
  return true;
}

}  // namespace helly
