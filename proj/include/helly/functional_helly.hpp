#pragma once

#include "helly/john_function.hpp"
#include "helly/linalg.hpp"
#include "helly/log_bound.hpp"
#include "helly/logconcave.hpp"
#include "helly/polytope.hpp"

#include <vector>

namespace helly {

// The John function alpha * h_ball(A (x - c)) of the original minimum. The
// normalized functions are f~(z) = f(A^{-1} z + c) / alpha; A is symmetric
// positive definite.
struct PositionTransform {
  double alpha = 1.0;
  Mat A;
  Vec c;

  Vec to_normalized(const Vec& x) const { return A * (x - c); }
  Vec to_original(const Vec& z) const;
  // Integral of f given the integral of f~.
  double unmap_integral(double normalized) const;
};

struct NormalizedFamily {
  std::vector<LogConcaveFn> fs;
  PositionTransform transform;
  JohnFunctionResult john;
};

NormalizedFamily normalize_to_john_position(const std::vector<LogConcaveFn>& fs, const JohnOptions& opt = {});

struct ContactPolytope {
  VPolytope Q;
  double inradius = 0.0;
};

// Q = conv(contacts). Throws UncertifiedError unless Q contains the ball of
// radius 1/(d+1) up to tol.
ContactPolytope lift_contact_polytope(const std::vector<Vec>& contacts, double tol = 1e-6);

// log of [2ed 12^d d^{4d} + 2 e^{52 d^5} 12^d d^{3d}] * theta^d d^{d/2}.
LogBound fqh_ratio_bound(int d, double theta);

struct SelectOptions {
  double theta = 4.0;
  JohnOptions john;
  double integration_tol = 1e-9;
};

struct SelectionCertificate {
  std::vector<int> sigma;
  // Indices into contacts.
  std::vector<int> tau1;
  int minimal_norm_index = -1;
  PositionTransform position_transform;
  LogBound ratio_bound;
  double measured_ratio = 1.0;

  std::vector<Vec> contacts;
  // i(j) for every contact j.
  std::vector<int> index_map;
  double q_inradius = 0.0;
  double p_inradius = 0.0;
  bool certified = false;
};

// At most 2d+1 indices whose minimum has integral within fqh_ratio_bound
// of that of the full minimum (d <= 2). Every function needs a bounding box.
SelectionCertificate select_subset(const std::vector<LogConcaveFn>& fs, const SelectOptions& opt = {});

struct SubsetRatio {
  std::vector<int> subset;
  double ratio = 0.0;
};
// Smallest integral ratio over all subsets of size min(k, n). Refuses n > 12.
SubsetRatio exhaustive_subset_ratio(const std::vector<LogConcaveFn>& fs, int k, double tol = 1e-9);

}  // namespace helly
