#include "helly/lp.hpp"

#include "helly/errors.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace helly {
namespace {

constexpr double kPivotTol = 1e-11;
constexpr double kCostTol = 1e-11;

// Tableau for min cost'z s.t. E z = r, z >= 0 with artificial columns
// appended. Row `rows()` holds reduced costs, the last column the rhs.
class Tableau {
 public:
  Tableau(const Mat& E, const Vec& r) : n_(E.rows()), m_(E.cols()) {
    T_ = Mat::Zero(n_ + 1, m_ + n_ + 1);
    sign_ = Vec::Ones(n_);
    for (Eigen::Index i = 0; i < n_; ++i) {
      if (r(i) < 0) sign_(i) = -1.0;
      T_.row(i).head(m_) = sign_(i) * E.row(i);
      T_(i, m_ + i) = 1.0;
      T_(i, m_ + n_) = sign_(i) * r(i);
    }
    basis_.resize(static_cast<std::size_t>(n_));
    for (Eigen::Index i = 0; i < n_; ++i) basis_[static_cast<std::size_t>(i)] = static_cast<int>(m_ + i);
  }

  // Phase 1: minimize the sum of artificials. Returns the optimum.
  double phase_one() {
    set_costs(Vec::Zero(m_), Vec::Ones(n_));
    iterate(m_ + n_);
    return -T_(n_, m_ + n_);
  }

  // Pivot remaining basic artificials out where possible.
  void expel_artificials() {
    for (Eigen::Index i = 0; i < n_; ++i) {
      if (basis_[static_cast<std::size_t>(i)] < m_) continue;
      for (Eigen::Index j = 0; j < m_; ++j) {
        if (std::abs(T_(i, j)) > 1e-9) {
          pivot(i, j);
          break;
        }
      }
    }
  }

  // Phase 2 with artificials barred from entering. Returns false on unbounded.
  bool phase_two(const Vec& cost) {
    set_costs(cost, Vec::Zero(n_));
    return iterate(m_);
  }

  double objective() const { return -T_(n_, m_ + n_); }

  // Simplex multipliers of the (unsigned) equality rows.
  Vec multipliers() const {
    Vec pi(n_);
    for (Eigen::Index i = 0; i < n_; ++i) pi(i) = -T_(n_, m_ + i) * sign_(i);
    return pi;
  }

  const std::vector<int>& basis() const { return basis_; }
  Eigen::Index structural() const { return m_; }

 private:
  void set_costs(const Vec& c_struct, const Vec& c_art) {
    T_.row(n_).setZero();
    T_.row(n_).head(m_) = c_struct.transpose();
    T_.row(n_).segment(m_, n_) = c_art.transpose();
    for (Eigen::Index i = 0; i < n_; ++i) {
      int bj = basis_[static_cast<std::size_t>(i)];
      double cb = bj < m_ ? c_struct(bj) : c_art(bj - m_);
      if (cb != 0.0) T_.row(n_) -= cb * T_.row(i);
    }
  }

  // Bland's rule over columns [0, allowed). Returns false when unbounded.
  bool iterate(Eigen::Index allowed) {
    const long cap = 50L * (m_ + n_) + 1000;
    for (long it = 0; it < cap; ++it) {
      Eigen::Index enter = -1;
      for (Eigen::Index j = 0; j < allowed; ++j) {
        if (T_(n_, j) < -kCostTol) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return true;
      Eigen::Index leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (Eigen::Index i = 0; i < n_; ++i) {
        double a = T_(i, enter);
        if (a <= kPivotTol) continue;
        double ratio = T_(i, m_ + n_) / a;
        if (ratio < best - 1e-14 ||
            (std::abs(ratio - best) <= 1e-14 && leave >= 0 &&
             basis_[static_cast<std::size_t>(i)] < basis_[static_cast<std::size_t>(leave)])) {
          best = ratio;
          leave = i;
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
    }
    throw HellyError("simplex iteration cap exceeded");
  }

  void pivot(Eigen::Index r, Eigen::Index c) {
    T_.row(r) /= T_(r, c);
    for (Eigen::Index i = 0; i <= n_; ++i) {
      if (i == r) continue;
      double f = T_(i, c);
      if (f != 0.0) T_.row(i) -= f * T_.row(r);
    }
    basis_[static_cast<std::size_t>(r)] = static_cast<int>(c);
  }

  Eigen::Index n_, m_;
  Mat T_;
  Vec sign_;
  std::vector<int> basis_;
};

double scale_of(const Vec& v) { return std::max(1.0, v.size() ? v.cwiseAbs().maxCoeff() : 0.0); }

// Is {x : A x <= b} nonempty? Farkas: infeasible iff some y >= 0 has A'y = 0
// and b'y < 0; normalized by 1'y = 1.
bool primal_feasible(const Mat& A, const Vec& b) {
  const Eigen::Index m = A.rows(), d = A.cols();
  Mat E(d + 1, m);
  E.topRows(d) = A.transpose();
  E.row(d).setOnes();
  Vec r = Vec::Zero(d + 1);
  r(d) = 1.0;
  Tableau t(E, r);
  if (t.phase_one() > 1e-9) return true;
  t.expel_artificials();
  if (!t.phase_two(b)) return false;
  return t.objective() >= -1e-9 * scale_of(b);
}

}  // namespace

LpResult solve_lp(const Vec& c, const Mat& A, const Vec& b) {
  const Eigen::Index m = A.rows(), d = A.cols();
  if (c.size() != d || b.size() != m) throw std::invalid_argument("solve_lp: dimension mismatch");
  LpResult res;
  Tableau t(A.transpose(), c);
  if (t.phase_one() > 1e-9 * scale_of(c)) {
    res.status = primal_feasible(A, b) ? LpStatus::Unbounded : LpStatus::Infeasible;
    return res;
  }
  t.expel_artificials();
  if (!t.phase_two(b)) {
    res.status = LpStatus::Infeasible;
    return res;
  }

  // Recover x from the basis: tight rows for basic constraints, zero
  // multiplier for rows whose artificial stayed basic.
  const auto& basis = t.basis();
  Mat S(d, d);
  Vec rhs(d);
  for (Eigen::Index i = 0; i < d; ++i) {
    int j = basis[static_cast<std::size_t>(i)];
    if (j < m) {
      S.row(i) = A.row(j);
      rhs(i) = b(j);
    } else {
      S.row(i) = Vec::Unit(d, j - m).transpose();
      rhs(i) = 0.0;
    }
  }
  Eigen::FullPivLU<Mat> lu(S);
  Vec x;
  if (d > 0) {
    if (!lu.isInvertible()) throw SingularBasisError(basis);
    x = lu.solve(rhs);
  } else {
    x = Vec(0);
  }
  // The simplex multipliers are the same point; prefer the direct solve but
  // check it against the constraints.
  const double tol = 1e-9 * std::max(scale_of(b), x.size() ? 1.0 + x.cwiseAbs().maxCoeff() : 1.0);
  if (m > 0 && (A * x - b).maxCoeff() > 1e3 * tol) {
    Vec alt = t.multipliers();
    if ((A * alt - b).maxCoeff() > 1e3 * tol) throw SingularBasisError(basis);
    x = alt;
  }
  res.status = LpStatus::Optimal;
  res.x = std::move(x);
  res.value = c.dot(res.x);
  return res;
}

}  // namespace helly
