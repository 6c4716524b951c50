#pragma once

#include "helly/linalg.hpp"

#include <functional>

namespace helly {

// Lawson-Hanson nonnegative least squares: argmin ||A x - b||, x >= 0.
Vec nnls(const Mat& A, const Vec& b, int max_iter = 0);

struct ScalarOpt {
  double x = 0.0;
  double value = 0.0;
};

// Golden-section search for the maximum of a unimodal function on [lo, hi].
ScalarOpt golden_max(const std::function<double(double)>& f, double lo, double hi,
                     double xtol = 1e-13);

struct NelderMeadOptions {
  int max_evals = 4000;
  double ftol = 1e-13;
  double xtol = 1e-11;
  double initial_step = 0.1;
};

struct NelderMeadResult {
  Vec x;
  double value = 0.0;
  int evals = 0;
};

// Maximizes f starting from x0. Restarts around the incumbent until a restart
// no longer improves the value.
NelderMeadResult nelder_mead_max(const std::function<double(const Vec&)>& f, const Vec& x0,
                                 const NelderMeadOptions& opt = {});

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  int evals = 0;
  bool converged = true;
};

// Adaptive Gauss-Kronrod (7/15) over [a, b] split at the given breakpoints.
// Stops when the summed error estimate is below max(abs_tol, rel_tol*|I|).
QuadResult integrate_1d(const std::function<double(double)>& f, double a, double b,
                        const std::vector<double>& breaks, double abs_tol, double rel_tol,
                        int max_evals = 200000);

}  // namespace helly
