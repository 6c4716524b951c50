#pragma once

#include "helly/polytope.hpp"

#include <vector>

namespace helly {

// 1 / (6 d^2).
double steinitz_threshold(int d);

struct SparsifyCheck {
  double inradius = 0.0;
  bool pass = false;
};
// Inradius of conv(S) about the origin by facet enumeration (d <= 3).
SparsifyCheck verify_sparsification(const VPolytope& S, int d);

struct SparsifyResult {
  std::vector<int> indices;
  double inradius = 0.0;
  bool exhaustive = false;
};

// Best subset of at most k points by origin inradius; ties go to the
// lexicographically first subset. Refuses more than 12 points.
SparsifyResult best_subset_exhaustive(const VPolytope& Q, int k);
// Greedy insertion followed by pairwise swaps, scored on sampled directions.
SparsifyResult greedy_swap_subset(const VPolytope& Q, int k);

// At most 2d points of Q whose hull contains the ball of radius 1/(6d^2),
// given that conv(Q) contains the unit ball.
SparsifyResult sparsify(const VPolytope& Q);

}  // namespace helly
