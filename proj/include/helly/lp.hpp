#pragma once

#include "helly/linalg.hpp"

namespace helly {

enum class LpStatus { Optimal, Unbounded, Infeasible };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  Vec x;
  double value = 0.0;

  bool optimal() const { return status == LpStatus::Optimal; }
};

// maximize <c, x> subject to A x <= b, x free.
//
// Solved through the dual standard form (min b'y, A'y = c, y >= 0) with a
// two-phase dense simplex under Bland's rule, so the tableau has one row per
// variable instead of one row per constraint. The primal point is recovered
// from the optimal basis. Throws SingularBasisError if that basis cannot be
// inverted.
LpResult solve_lp(const Vec& c, const Mat& A, const Vec& b);

}  // namespace helly
