#include "helly/functional_helly.hpp"

#include "helly/errors.hpp"
#include "helly/steinitz.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>

namespace helly {

namespace {

// Symmetric positive definite square root of A^T A.
Mat symmetric_part(const Mat& A) {
  Eigen::SelfAdjointEigenSolver<Mat> es(A.transpose() * A);
  return es.eigenvectors() * es.eigenvalues().cwiseSqrt().asDiagonal() * es.eigenvectors().transpose();
}

// Indices of points that are not in the hull of the others, first copy of
// duplicates kept.
std::vector<int> hull_vertex_indices(const std::vector<Vec>& pts) {
  std::vector<int> out;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    bool dup = false;
    for (std::size_t j = 0; j < i && !dup; ++j) dup = (pts[i] - pts[j]).norm() <= 1e-9;
    if (dup) continue;
    std::vector<Vec> others;
    for (std::size_t j = 0; j < pts.size(); ++j)
      if (j != i && (pts[j] - pts[i]).norm() > 1e-9) others.push_back(pts[j]);
    if (others.empty() || !in_hull(VPolytope(others), pts[i], 1e-12)) out.push_back(static_cast<int>(i));
  }
  return out;
}

// Point at which i(j) is read off: contacts on the unit sphere are pushed
// slightly outward, where the responsible function vanishes.
Vec probe_point(const Vec& u) {
  const double r = u.norm();
  return r >= 1.0 - 1e-9 ? Vec(u * (1.0 + 1e-7) / r) : u;
}

}  // namespace

Vec PositionTransform::to_original(const Vec& z) const { return A.ldlt().solve(z) + c; }

double PositionTransform::unmap_integral(double normalized) const {
  return normalized * alpha / std::abs(A.determinant());
}

NormalizedFamily normalize_to_john_position(const std::vector<LogConcaveFn>& fs, const JohnOptions& opt) {
  if (fs.empty()) throw PreconditionError("normalize_to_john_position: empty family");
  NormalizedFamily out;
  out.john = john_function(pointwise_min(fs), opt);
  const EllipsoidalFunction& g = out.john.g;
  out.transform.alpha = g.alpha;
  out.transform.A = symmetric_part(g.A);
  out.transform.c = g.c;
  const Mat Ai = out.transform.A.inverse();
  for (const auto& f : fs) out.fs.push_back(pullback(f, 1.0 / g.alpha, Ai, g.c));
  // The contacts are stated in the frame where g is h_ball under g.A; rotate
  // them into the frame of the symmetric representative.
  const Mat R = out.transform.A * g.A.inverse();
  for (auto& u : out.john.contacts) u = R * u;
  out.john.g = EllipsoidalFunction::standard(g.dim());
  return out;
}

ContactPolytope lift_contact_polytope(const std::vector<Vec>& contacts, double tol) {
  if (contacts.empty()) throw UncertifiedError("lift_contact_polytope: no contacts");
  const int d = static_cast<int>(contacts.front().size());
  ContactPolytope out{VPolytope(contacts), 0.0};
  auto in = inball_radius_centered(out.Q);
  out.inradius = in.origin_inside ? in.radius : 0.0;
  if (out.inradius < 1.0 / (d + 1) - tol)
    throw UncertifiedError("contact hull inradius " + std::to_string(out.inradius) + " below 1/(d+1)");
  return out;
}

LogBound fqh_ratio_bound(int d, double theta) {
  const double ld = std::log(static_cast<double>(d));
  const auto tail = LogBound::from_log(std::log(2.0) + 1.0 + ld + d * std::log(12.0) + 4.0 * d * ld);
  const auto core =
      LogBound::from_log(std::log(2.0) + 52.0 * std::pow(d, 5) + d * std::log(12.0) + 3.0 * d * ld);
  return (tail + core) * LogBound::from_log(d * std::log(theta) + 0.5 * d * ld);
}

SelectionCertificate select_subset(const std::vector<LogConcaveFn>& fs, const SelectOptions& opt) {
  if (fs.empty()) throw PreconditionError("select_subset: empty family");
  const int n = static_cast<int>(fs.size());
  const int d = fs.front().dim();
  if (d > 2) throw UnsupportedDimension(d, 2);

  SelectionCertificate cert;
  cert.ratio_bound = fqh_ratio_bound(d, opt.theta);
  NormalizedFamily nf = normalize_to_john_position(fs, opt.john);
  cert.position_transform = nf.transform;
  cert.contacts = nf.john.contacts;
  cert.certified = nf.john.certified;
  const auto& u = cert.contacts;
  const int m = static_cast<int>(u.size());
  if (m == 0) throw UncertifiedError("select_subset: John solver returned no contacts");

  for (int j = 0; j < m; ++j) {
    const Vec x = probe_point(u[static_cast<std::size_t>(j)]);
    int best = 0;
    double bv = nf.fs[0](x);
    for (int i = 1; i < n; ++i) {
      const double v = nf.fs[static_cast<std::size_t>(i)](x);
      if (v < bv) {
        bv = v;
        best = i;
      }
    }
    cert.index_map.push_back(best);
  }

  ContactPolytope cp;
  try {
    cp = lift_contact_polytope(u);
  } catch (const UncertifiedError&) {
    cert.certified = false;
    cp.Q = VPolytope(u);
    auto in = inball_radius_centered(cp.Q);
    cp.inradius = in.origin_inside ? in.radius : 0.0;
    if (cp.inradius <= 0.0) throw;
  }
  cert.q_inradius = cp.inradius;

  const std::vector<int> verts = hull_vertex_indices(u);
  std::vector<Vec> scaled;
  for (int j : verts) scaled.push_back(u[static_cast<std::size_t>(j)] / cp.inradius);
  const SparsifyResult sp = sparsify(VPolytope(scaled));
  std::vector<Vec> pverts;
  for (int k : sp.indices) {
    cert.tau1.push_back(verts[static_cast<std::size_t>(k)]);
    pverts.push_back(u[static_cast<std::size_t>(verts[static_cast<std::size_t>(k)])]);
  }
  cert.p_inradius = verify_sparsification(VPolytope(pverts), d).inradius;
  if (cert.p_inradius < 1.0 / (12.0 * d * d * d) - 1e-6) cert.certified = false;

  // The proof needs h(u)^2 >= 1/(d+1)^2 at the extra contact, which the
  // minimal-norm contact satisfies whenever the lifted hull contains the
  // (d+1)-shrunk ball.
  int jstar = 0;
  for (int j = 1; j < m; ++j) {
    const double a = u[static_cast<std::size_t>(j)].squaredNorm(), b = u[static_cast<std::size_t>(jstar)].squaredNorm();
    if (a < b || (a == b && std::lexicographical_compare(u[static_cast<std::size_t>(j)].begin(),
                                                         u[static_cast<std::size_t>(j)].end(),
                                                         u[static_cast<std::size_t>(jstar)].begin(),
                                                         u[static_cast<std::size_t>(jstar)].end())))
      jstar = j;
  }
  cert.minimal_norm_index = jstar;
  if (1.0 - u[static_cast<std::size_t>(jstar)].squaredNorm() < 1.0 / ((d + 1.0) * (d + 1.0)) - 1e-6)
    cert.certified = false;

  for (int j : cert.tau1) cert.sigma.push_back(cert.index_map[static_cast<std::size_t>(j)]);
  cert.sigma.push_back(cert.index_map[static_cast<std::size_t>(jstar)]);
  std::sort(cert.sigma.begin(), cert.sigma.end());
  cert.sigma.erase(std::unique(cert.sigma.begin(), cert.sigma.end()), cert.sigma.end());

  std::vector<LogConcaveFn> picked;
  for (int i : cert.sigma) picked.push_back(fs[static_cast<std::size_t>(i)]);
  const double num = integrate(pointwise_min(picked), opt.integration_tol).value;
  const double den = static_cast<int>(cert.sigma.size()) == n ? num : integrate(pointwise_min(fs), opt.integration_tol).value;
  if (!(den > 0.0)) throw PreconditionError("select_subset: minimum of the family has zero integral");
  cert.measured_ratio = num / den;
  if (cert.measured_ratio < 1.0 - 1e-6)
    throw HellyError("select_subset: measured ratio " + std::to_string(cert.measured_ratio) + " below 1");
  return cert;
}

SubsetRatio exhaustive_subset_ratio(const std::vector<LogConcaveFn>& fs, int k, double tol) {
  const int n = static_cast<int>(fs.size());
  if (n > 12) throw PreconditionError("exhaustive subset oracle refuses more than 12 functions");
  if (n == 0) throw PreconditionError("exhaustive subset oracle: empty family");
  const int m = std::min(k, n);
  const double den = integrate(pointwise_min(fs), tol).value;
  SubsetRatio best;
  best.ratio = std::numeric_limits<double>::infinity();
  std::vector<int> c(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) c[static_cast<std::size_t>(i)] = i;
  while (true) {
    std::vector<LogConcaveFn> picked;
    for (int i : c) picked.push_back(fs[static_cast<std::size_t>(i)]);
    const double r = (m == n ? den : integrate(pointwise_min(picked), tol).value) / den;
    if (r < best.ratio) {
      best.ratio = r;
      best.subset = c;
    }
    int i = m - 1;
    while (i >= 0 && c[static_cast<std::size_t>(i)] == n - m + i) --i;
    if (i < 0) break;
    ++c[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < m; ++j) c[static_cast<std::size_t>(j)] = c[static_cast<std::size_t>(j) - 1] + 1;
  }
  return best;
}

}  // namespace helly
