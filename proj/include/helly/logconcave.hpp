#pragma once

#include "helly/linalg.hpp"
#include "helly/log_bound.hpp"
#include "helly/polytope.hpp"

#include <memory>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

namespace helly {

// sqrt(1 - |x|^2) on the unit ball, 0 outside.
double h_ball(const Vec& x);
// Integral of h_ball over R^d, i.e. half the volume of the unit (d+1)-ball.
double h_integral(int d);

struct Box {
  Vec lo;
  Vec hi;
  int dim() const { return static_cast<int>(lo.size()); }
};

// x -> alpha * h_ball(A (x - c)).
struct EllipsoidalFunction {
  double alpha = 1.0;
  Mat A;
  Vec c;

  EllipsoidalFunction() = default;
  EllipsoidalFunction(double alpha, Mat A, Vec c);
  static EllipsoidalFunction standard(int d);

  int dim() const { return static_cast<int>(c.size()); }
  double operator()(const Vec& x) const;
  double integral() const;
  // L with base ellipsoid L B + c, L lower triangular with positive diagonal.
  Mat base_generator() const;
  Box bounding_box() const;
  // x -> s * g(T x + t).
  EllipsoidalFunction position(double s, const Mat& T, const Vec& t) const;
  // x -> g(x + a).
  EllipsoidalFunction translated(const Vec& a) const;
};

// exp(-max_j(<s_j, x> + t_j)) on domain, 0 outside.
struct PolyLogLinear {
  std::vector<Vec> slopes;
  std::vector<double> intercepts;
  HPolytope domain;
};

struct ConstClamp {
  int d = 1;
  double level = 1.0;
};

class LogConcaveFn;

struct MinOf {
  std::vector<LogConcaveFn> children;
};

class LogConcaveFn {
 public:
  using Node = std::variant<PolyLogLinear, EllipsoidalFunction, ConstClamp, MinOf>;

  LogConcaveFn(PolyLogLinear f);
  LogConcaveFn(EllipsoidalFunction f);
  LogConcaveFn(ConstClamp f);
  LogConcaveFn(MinOf f);

  int dim() const { return dim_; }
  const Node& node() const { return *node_; }
  double operator()(const Vec& x) const;

  // Declared integration box, or one derived from bounded support.
  std::optional<Box> box() const;
  bool box_declared() const { return declared_.has_value(); }
  // The support itself is bounded, regardless of any declared box.
  bool bounded_support() const;
  LogConcaveFn with_box(const Vec& lo, const Vec& hi) const;

  const EllipsoidalFunction* as_ellipsoidal() const { return std::get_if<EllipsoidalFunction>(node_.get()); }

 private:
  std::shared_ptr<const Node> node_;
  std::optional<Box> declared_;
  int dim_ = 0;
};

// Indicator-like constant `level` on P.
LogConcaveFn constant_on(const HPolytope& P, double level = 1.0);
LogConcaveFn pointwise_min(const std::vector<LogConcaveFn>& fs);
// x -> s * f(T x + t), T invertible.
LogConcaveFn pullback(const LogConcaveFn& f, double s, const Mat& T, const Vec& t);

struct IntegralResult {
  double value = 0.0;
  double error = 0.0;
  bool converged = true;
  // Mass may lie outside the integration box.
  bool truncated = false;
};

// Closed form for ellipsoidal functions, nested adaptive quadrature otherwise
// (d <= 3). Throws PreconditionError without a bounding box.
IntegralResult integrate(const LogConcaveFn& f, double tol = 1e-8);

// Log-linear majorant touching h_ball at u, |u| < 1 - 1e-9.
LogConcaveFn ell_u(const Vec& u);
// Contact points are clamped to this norm before ell_u is formed.
inline constexpr double kContactClamp = 1.0 - 1e-9;
Vec clamp_contact(const Vec& u);

// Regular grid of about n points over a box (per-axis count n^{1/d}).
std::vector<Vec> box_grid(const Box& b, int n);
// max over the grid of g(x) - f(x).
double max_excess(const LogConcaveFn& g, const LogConcaveFn& f, const Box& b, int n);

// f <= ell_u on a 10^4-point grid, given f >= h_ball on that grid and
// f(u) = h_ball(u). Throws PreconditionError otherwise.
bool check_loglinear_majorant(const LogConcaveFn& f, const Vec& u, const Box& b);

struct TailCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  double delta = 0.0;
  bool holds() const { return lhs <= rhs + 1e-12; }
};
// min over vertices u of ell_u at x against e * exp(-|x|_{P polar}).
TailCheck tail_bound_check(const VPolytope& P, const Vec& x);
LogBound tail_integral_bound(double delta, int d);

}  // namespace helly
