#include "helly/polytope.hpp"

#include "helly/errors.hpp"
#include "helly/sphere.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace helly {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

double rel_tol(const Vec& b) { return kTol * std::max(1.0, b.size() ? b.cwiseAbs().maxCoeff() : 0.0); }
}  // namespace

HPolytope::HPolytope(Mat A, Vec b) : A_(std::move(A)), b_(std::move(b)) {
  if (A_.rows() != b_.size()) throw std::invalid_argument("HPolytope: A and b row counts differ");
  for (Eigen::Index i = 0; i < A_.rows(); ++i)
    if (A_.row(i).norm() == 0.0) throw std::invalid_argument("HPolytope: zero row in A");
}

HPolytope HPolytope::whole_space(int d) { return HPolytope(Mat(0, d), Vec(0)); }

HPolytope HPolytope::box(const Vec& lo, const Vec& hi) {
  const Eigen::Index d = lo.size();
  if (hi.size() != d) throw std::invalid_argument("box: dimension mismatch");
  Mat A = Mat::Zero(2 * d, d);
  Vec b(2 * d);
  for (Eigen::Index i = 0; i < d; ++i) {
    A(2 * i, i) = 1.0;
    b(2 * i) = hi(i);
    A(2 * i + 1, i) = -1.0;
    b(2 * i + 1) = -lo(i);
  }
  return HPolytope(A, b);
}

HPolytope HPolytope::cube(int d, double half) {
  return box(Vec::Constant(d, -half), Vec::Constant(d, half));
}

HPolytope HPolytope::regular_polygon(int k, double inradius, double phase) {
  if (k < 3) throw std::invalid_argument("regular_polygon: need k >= 3");
  Mat A(k, 2);
  Vec b = Vec::Constant(k, inradius);
  for (int i = 0; i < k; ++i) {
    double t = 2.0 * M_PI * i / k + phase;
    A(i, 0) = std::cos(t);
    A(i, 1) = std::sin(t);
  }
  return HPolytope(A, b);
}

bool HPolytope::feasible() const {
  return solve_lp(Vec::Zero(dim()), A_, b_).status != LpStatus::Infeasible;
}

bool HPolytope::contains(const Vec& x, double tol) const {
  if (rows() == 0) return true;
  return (A_ * x - b_).maxCoeff() <= tol;
}

HPolytope HPolytope::image(const Mat& T, const Vec& t) const {
  // y = T x + t  =>  x = T^{-1}(y - t);  A T^{-1} y <= b + A T^{-1} t
  Eigen::FullPivLU<Mat> lu(T);
  if (!lu.isInvertible()) throw std::invalid_argument("HPolytope::image: singular map");
  Mat Ti = lu.inverse();
  Mat A2 = A_ * Ti;
  return HPolytope(A2, b_ + A2 * t);
}

HPolytope HPolytope::translated(const Vec& t) const { return HPolytope(A_, b_ + A_ * t); }

VPolytope::VPolytope(const std::vector<Vec>& pts) {
  for (const auto& p : pts) {
    bool dup = false;
    for (const auto& q : pts_)
      if ((p - q).norm() <= kTol) {
        dup = true;
        break;
      }
    if (!dup) pts_.push_back(p);
  }
}

Direction::Direction(const Vec& v) {
  double n = v.norm();
  if (!(n > 0.0)) throw std::invalid_argument("Direction: zero vector");
  u = v / n;
}

LpResult solve_lp(const Vec& objective, const HPolytope& P) {
  return solve_lp(objective, P.A(), P.b());
}

SupportResult support(const HPolytope& P, const Vec& u) {
  LpResult r = solve_lp(u, P);
  SupportResult s;
  s.status = r.status;
  if (r.optimal()) {
    s.value = r.value;
    s.point = r.x;
  } else if (r.status == LpStatus::Unbounded) {
    s.value = kInf;
  }
  return s;
}

double width(const HPolytope& P, const Vec& u) {
  SupportResult hi = support(P, u);
  if (hi.status == LpStatus::Infeasible) throw InfeasibleError("width: empty polytope");
  SupportResult lo = support(P, -u);
  if (!hi.bounded() || !lo.bounded()) return kInf;
  return std::max(0.0, hi.value + lo.value);
}

Strip supporting_strip(const HPolytope& P, const Vec& u) {
  Direction dir(u);
  SupportResult hi = support(P, dir.u);
  if (hi.status == LpStatus::Infeasible) throw InfeasibleError("supporting_strip: empty polytope");
  SupportResult lo = support(P, -dir.u);
  if (!hi.bounded() || !lo.bounded()) throw PreconditionError("supporting_strip: unbounded in direction");
  Strip s;
  s.u = dir.u;
  s.alpha = -lo.value;
  s.beta = std::max(hi.value, s.alpha);
  return s;
}

Hyperplane midplane(const Strip& s) { return {s.u, 0.5 * (s.alpha + s.beta)}; }

HPolytope intersect(const std::vector<HPolytope>& Ps) {
  if (Ps.empty()) throw std::invalid_argument("intersect: empty list");
  const int d = Ps.front().dim();
  Eigen::Index m = 0;
  for (const auto& P : Ps) {
    if (P.dim() != d) throw std::invalid_argument("intersect: dimension mismatch");
    m += P.rows();
  }
  Mat A(m, d);
  Vec b(m);
  Eigen::Index r = 0;
  for (const auto& P : Ps) {
    A.middleRows(r, P.rows()) = P.A();
    b.segment(r, P.rows()) = P.b();
    r += P.rows();
  }
  return HPolytope(A, b);
}

bool bounded(const HPolytope& P) {
  const int d = P.dim();
  for (int i = 0; i < d; ++i) {
    for (double s : {1.0, -1.0}) {
      LpResult r = solve_lp(s * Vec::Unit(d, i), P);
      if (r.status == LpStatus::Unbounded) return false;
      if (r.status == LpStatus::Infeasible) return true;
    }
  }
  return true;
}

VPolytope vertices(const HPolytope& P) {
  const int d = P.dim();
  if (d > 3) throw UnsupportedDimension(d, 3);
  const int m = P.rows();
  const Mat& A = P.A();
  const Vec& b = P.b();
  const double tol = rel_tol(b);
  std::vector<Vec> out;
  if (m < d) return VPolytope(out);
  std::vector<int> idx(static_cast<std::size_t>(d));
  std::iota(idx.begin(), idx.end(), 0);
  Mat S(d, d);
  Vec r(d);
  while (true) {
    for (int k = 0; k < d; ++k) {
      S.row(k) = A.row(idx[static_cast<std::size_t>(k)]);
      r(k) = b(idx[static_cast<std::size_t>(k)]);
    }
    Eigen::FullPivLU<Mat> lu(S);
    if (lu.isInvertible() && std::abs(lu.determinant()) > 1e-13 * std::pow(S.norm(), d)) {
      Vec x = lu.solve(r);
      if (P.contains(x, tol)) {
        bool dup = false;
        for (const auto& q : out)
          if ((x - q).norm() <= kTol) {
            dup = true;
            break;
          }
        if (!dup) out.push_back(x);
      }
    }
    int k = d - 1;
    while (k >= 0 && idx[static_cast<std::size_t>(k)] == m - d + k) --k;
    if (k < 0) break;
    ++idx[static_cast<std::size_t>(k)];
    for (int j = k + 1; j < d; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
  return VPolytope(out);
}

double diameter_of_points(const std::vector<Vec>& pts) {
  double best = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) best = std::max(best, (pts[i] - pts[j]).norm());
  return best;
}

DiameterResult diameter(const HPolytope& P, int samples) {
  DiameterResult res;
  const int d = P.dim();
  if (!P.feasible()) {
    res.empty = true;
    return res;
  }
  if (!bounded(P)) {
    res.value = kInf;
    return res;
  }
  if (d <= 3) {
    res.value = diameter_of_points(vertices(P).points());
    return res;
  }
  std::mt19937_64 rng(0x5eedULL);
  for (int s = 0; s < samples; ++s) res.value = std::max(res.value, width(P, random_unit(d, rng)));
  res.lower_bound = true;
  return res;
}

HPolytope polar(const VPolytope& X) {
  std::vector<Vec> rows;
  for (const auto& p : X.points())
    if (p.norm() > 0.0) rows.push_back(p);
  const int d = X.dim();
  Mat A(static_cast<Eigen::Index>(rows.size()), d);
  for (std::size_t i = 0; i < rows.size(); ++i) A.row(static_cast<Eigen::Index>(i)) = rows[i].transpose();
  return HPolytope(A, Vec::Ones(static_cast<Eigen::Index>(rows.size())));
}

double gauge_norm(const Vec& x, const HPolytope& K) {
  if (K.rows() > 0 && K.b().minCoeff() <= 0.0)
    throw PreconditionError("gauge_norm: origin is not an interior point of K");
  double g = 0.0;
  for (Eigen::Index i = 0; i < K.rows(); ++i) g = std::max(g, K.A().row(i).dot(x) / K.b()(i));
  return g;
}

InballResult inball_radius_centered(const HPolytope& P) {
  InballResult r;
  if (P.rows() == 0) {
    r.radius = kInf;
    r.origin_inside = true;
    return r;
  }
  double best = kInf;
  for (Eigen::Index i = 0; i < P.rows(); ++i) best = std::min(best, P.b()(i) / P.A().row(i).norm());
  r.origin_inside = best >= -kTol;
  r.radius = std::max(0.0, best);
  return r;
}

InballResult inball_radius_centered(const VPolytope& X) {
  try {
    return inball_radius_centered(hull_facets(X));
  } catch (const DegenerateSpanError&) {
    InballResult r;
    r.origin_inside = in_hull(X, Vec::Zero(X.dim()));
    return r;
  }
}

namespace {

int affine_rank(const std::vector<Vec>& pts, double tol) {
  if (pts.size() < 2) return 0;
  Mat M(pts.front().size(), static_cast<Eigen::Index>(pts.size()) - 1);
  for (std::size_t i = 1; i < pts.size(); ++i) M.col(static_cast<Eigen::Index>(i) - 1) = pts[i] - pts[0];
  Eigen::JacobiSVD<Mat> svd(M);
  const Vec& s = svd.singularValues();
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > tol * std::max(1.0, s(0))) ++r;
  return r;
}

double cross2(const Vec& o, const Vec& a, const Vec& b) {
  return (a(0) - o(0)) * (b(1) - o(1)) - (a(1) - o(1)) * (b(0) - o(0));
}

HPolytope hull2(const std::vector<Vec>& in) {
  std::vector<Vec> p = in;
  std::sort(p.begin(), p.end(), [](const Vec& a, const Vec& b) {
    return a(0) < b(0) || (a(0) == b(0) && a(1) < b(1));
  });
  std::vector<Vec> h(2 * p.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    while (k >= 2 && cross2(h[k - 2], h[k - 1], p[i]) <= 1e-14) --k;
    h[k++] = p[i];
  }
  for (std::size_t i = p.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross2(h[k - 2], h[k - 1], p[i]) <= 1e-14) --k;
    h[k++] = p[i];
  }
  h.resize(k - 1);
  if (h.size() < 3) throw DegenerateSpanError(1, 2);
  Mat A(static_cast<Eigen::Index>(h.size()), 2);
  Vec b(static_cast<Eigen::Index>(h.size()));
  for (std::size_t i = 0; i < h.size(); ++i) {
    const Vec& a = h[i];
    const Vec& c = h[(i + 1) % h.size()];
    Vec n(2);
    n << c(1) - a(1), a(0) - c(0);  // outward for counter-clockwise order
    n.normalize();
    A.row(static_cast<Eigen::Index>(i)) = n.transpose();
    b(static_cast<Eigen::Index>(i)) = n.dot(a);
  }
  return HPolytope(A, b);
}

HPolytope hull3(const std::vector<Vec>& p) {
  const std::size_t n = p.size();
  double scale = 0.0;
  for (const auto& q : p) scale = std::max(scale, q.cwiseAbs().maxCoeff());
  const double tol = 1e-10 * std::max(1.0, scale);
  std::vector<Vec> normals;
  std::vector<double> offs;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = j + 1; k < n; ++k) {
        Eigen::Vector3d a = p[i], b = p[j], c = p[k];
        Eigen::Vector3d nv = (b - a).cross(c - a);
        double nn = nv.norm();
        if (nn <= 1e-12 * std::max(1.0, scale * scale)) continue;
        nv /= nn;
        double off = nv.dot(a);
        bool below = true, above = true;
        for (std::size_t l = 0; l < n && (below || above); ++l) {
          double s = Eigen::Vector3d(p[l]).dot(nv) - off;
          if (s > tol) below = false;
          if (s < -tol) above = false;
        }
        if (!below && !above) continue;
        if (!below) {
          nv = -nv;
          off = -off;
        }
        Vec v = nv;
        bool dup = false;
        for (std::size_t f = 0; f < normals.size(); ++f)
          if ((normals[f] - v).norm() < 1e-9 && std::abs(offs[f] - off) < 1e-9 * std::max(1.0, scale)) {
            dup = true;
            break;
          }
        if (!dup) {
          normals.push_back(v);
          offs.push_back(off);
        }
      }
  Mat A(static_cast<Eigen::Index>(normals.size()), 3);
  Vec b(static_cast<Eigen::Index>(normals.size()));
  for (std::size_t f = 0; f < normals.size(); ++f) {
    A.row(static_cast<Eigen::Index>(f)) = normals[f].transpose();
    b(static_cast<Eigen::Index>(f)) = offs[f];
  }
  return HPolytope(A, b);
}

}  // namespace

HPolytope hull_facets(const VPolytope& X) {
  const int d = X.dim();
  if (d > 3) throw UnsupportedDimension(d, 3);
  const auto& p = X.points();
  if (p.empty()) throw std::invalid_argument("hull_facets: empty point set");
  int rank = affine_rank(p, 1e-10);
  if (rank < d) throw DegenerateSpanError(d - rank, d);
  if (d == 1) {
    double lo = kInf, hi = -kInf;
    for (const auto& q : p) {
      lo = std::min(lo, q(0));
      hi = std::max(hi, q(0));
    }
    Mat A(2, 1);
    A << 1.0, -1.0;
    Vec b(2);
    b << hi, -lo;
    return HPolytope(A, b);
  }
  if (d == 2) return hull2(p);
  return hull3(p);
}

bool in_hull(const VPolytope& X, const Vec& x, double tol) {
  const auto& p = X.points();
  const Eigen::Index n = static_cast<Eigen::Index>(p.size());
  const Eigen::Index d = x.size();
  // Variables lambda (n). Constraints: -lambda <= 0, +-(P lambda - x) <= tol,
  // +-(1'lambda - 1) <= tol.
  Mat A = Mat::Zero(n + 2 * d + 2, n);
  Vec b = Vec::Zero(n + 2 * d + 2);
  A.topRows(n) = -Mat::Identity(n, n);
  Mat P = X.matrix();
  A.middleRows(n, d) = P;
  b.segment(n, d) = x + Vec::Constant(d, tol);
  A.middleRows(n + d, d) = -P;
  b.segment(n + d, d) = -x + Vec::Constant(d, tol);
  A.row(n + 2 * d).setOnes();
  b(n + 2 * d) = 1.0 + tol;
  A.row(n + 2 * d + 1).setConstant(-1.0);
  b(n + 2 * d + 1) = -1.0 + tol;
  return solve_lp(Vec::Zero(n), A, b).status != LpStatus::Infeasible;
}

std::optional<ChebyshevBall> chebyshev_ball(const HPolytope& P) {
  const int d = P.dim();
  const int m = P.rows();
  Mat A(m + 1, d + 1);
  Vec b(m + 1);
  for (int i = 0; i < m; ++i) {
    A.row(i).head(d) = P.A().row(i);
    A(i, d) = P.A().row(i).norm();
    b(i) = P.b()(i);
  }
  A.row(m).setZero();
  A(m, d) = -1.0;
  b(m) = 0.0;
  Vec c = Vec::Zero(d + 1);
  c(d) = 1.0;
  LpResult r = solve_lp(c, A, b);
  if (r.status == LpStatus::Infeasible) return std::nullopt;
  if (r.status == LpStatus::Unbounded) throw PreconditionError("chebyshev_ball: unbounded inradius");
  return ChebyshevBall{r.x.head(d), r.x(d)};
}

}  // namespace helly
