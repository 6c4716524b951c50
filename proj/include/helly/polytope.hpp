#pragma once

#include "helly/linalg.hpp"
#include "helly/lp.hpp"

#include <optional>
#include <vector>

namespace helly {

// {x : A x <= b}. Zero rows describe the whole space.
class HPolytope {
 public:
  HPolytope() = default;
  HPolytope(Mat A, Vec b);
  static HPolytope whole_space(int d);
  static HPolytope box(const Vec& lo, const Vec& hi);
  static HPolytope cube(int d, double half = 1.0);
  // Regular k-gon with the given inradius, facet normals at angles 2*pi*i/k + phase.
  static HPolytope regular_polygon(int k, double inradius = 1.0, double phase = 0.0);

  int dim() const { return static_cast<int>(A_.cols()); }
  int rows() const { return static_cast<int>(A_.rows()); }
  const Mat& A() const { return A_; }
  const Vec& b() const { return b_; }

  bool feasible() const;
  bool contains(const Vec& x, double tol = kTol) const;
  // Image under x -> T x + t (T invertible).
  HPolytope image(const Mat& T, const Vec& t) const;
  HPolytope translated(const Vec& t) const;

 private:
  Mat A_;
  Vec b_;
};

class VPolytope {
 public:
  VPolytope() = default;
  // Exact duplicates (within 1e-9) are merged; order of first occurrence kept.
  explicit VPolytope(const std::vector<Vec>& pts);

  int dim() const { return pts_.empty() ? 0 : static_cast<int>(pts_.front().size()); }
  std::size_t size() const { return pts_.size(); }
  const std::vector<Vec>& points() const& { return pts_; }
  std::vector<Vec> points() && { return std::move(pts_); }
  const Vec& operator[](std::size_t i) const { return pts_[i]; }
  Mat matrix() const { return columns(pts_); }

 private:
  std::vector<Vec> pts_;
};

struct Direction {
  Vec u;
  explicit Direction(const Vec& v);
};

struct Strip {
  Vec u;
  double alpha = 0.0;
  double beta = 0.0;
  double width() const { return beta - alpha; }
  bool degenerate() const { return beta - alpha <= kTol; }
};

struct Hyperplane {
  Vec u;
  double offset = 0.0;
};

LpResult solve_lp(const Vec& objective, const HPolytope& P);

struct SupportResult {
  LpStatus status = LpStatus::Infeasible;
  double value = 0.0;
  Vec point;
  bool bounded() const { return status == LpStatus::Optimal; }
};

SupportResult support(const HPolytope& P, const Vec& u);
// +inf when unbounded in +-u; throws InfeasibleError when P is empty.
double width(const HPolytope& P, const Vec& u);
Strip supporting_strip(const HPolytope& P, const Vec& u);
Hyperplane midplane(const Strip& s);
HPolytope intersect(const std::vector<HPolytope>& Ps);
bool bounded(const HPolytope& P);

// Exact vertex enumeration for d <= 3. Returns an empty list for an empty P.
VPolytope vertices(const HPolytope& P);

struct DiameterResult {
  double value = 0.0;
  bool lower_bound = false;  // true when only sampled directions were used
  bool empty = false;
};
// Infinite for unbounded P; zero with empty=true for an empty P.
DiameterResult diameter(const HPolytope& P, int samples = 4000);
double diameter_of_points(const std::vector<Vec>& pts);

HPolytope polar(const VPolytope& X);
double gauge_norm(const Vec& x, const HPolytope& K);

struct InballResult {
  double radius = 0.0;
  bool origin_inside = false;
};
InballResult inball_radius_centered(const HPolytope& P);
InballResult inball_radius_centered(const VPolytope& X);

// Facets of conv(X) as an H-polytope (d <= 3). Throws DegenerateSpanError when
// the hull is not full dimensional.
HPolytope hull_facets(const VPolytope& X);
// LP membership test x in conv(X).
bool in_hull(const VPolytope& X, const Vec& x, double tol = kTol);
// Max r with rB + center inside P (Chebyshev ball).
struct ChebyshevBall {
  Vec center;
  double radius = 0.0;
};
std::optional<ChebyshevBall> chebyshev_ball(const HPolytope& P);

}  // namespace helly
