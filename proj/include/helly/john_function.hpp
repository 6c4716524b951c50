#pragma once

#include "helly/linalg.hpp"
#include "helly/logconcave.hpp"

#include <limits>
#include <optional>
#include <vector>

namespace helly {

// A constraint of the height problem, located at y in the frame where the
// candidate base ellipsoid is the unit ball. gap is the relative slack.
struct HeightContact {
  Vec y;
  double gap = 0.0;
};

// log of the largest t with t * h_ball(L^{-1}(x - c)) <= f(x) for all x;
// -inf if the base ellipsoid L B + c does not fit under the support of f.
double max_feasible_log_height(const LogConcaveFn& f, const Mat& L, const Vec& c,
                               std::vector<HeightContact>* contacts = nullptr);

// Minimizes y'Hy + 2g'y + k over the closed unit ball.
struct TrustRegionResult {
  double value = 0.0;
  Vec y;
};
TrustRegionResult trust_region_min(const Mat& H, const Vec& g, double k);

struct JohnOptions {
  int starts = 3;
  double certificate_tol = 1e-3;
};

struct JohnFunctionResult {
  EllipsoidalFunction g;
  // Contacts in the frame where g is h_ball, with their positive weights.
  std::vector<Vec> contacts;
  Vec weights;
  double residual_identity = 0.0;
  double residual_height = 0.0;
  double residual_centroid = 0.0;
  bool certified = false;
  double residual() const { return std::max({residual_identity, residual_height, residual_centroid}); }
};

// Largest-integral ellipsoidal function below f (d <= 2), with a contact
// decomposition certificate.
JohnFunctionResult john_function(const LogConcaveFn& f, const JohnOptions& opt = {});

// Weights for sum c u u^T = Id, sum c h(u)^2 = 1, sum c u = 0 over the given
// points, with the three residual norms.
struct ContactDecomposition {
  Vec weights;
  double identity = 0.0;
  double height = 0.0;
  double centroid = 0.0;
};
ContactDecomposition fit_contact_weights(const std::vector<Vec>& pts);

double integral_ratio(const LogConcaveFn& f, const EllipsoidalFunction& g);

// log of the largest height of the translate g(. + a) below f, minus log of
// the height of g. Nonnegative exactly when the translate lies below f.
double translate_margin(const LogConcaveFn& f, const EllipsoidalFunction& g, const Vec& a);

// Some a in the search box with g(. + a) <= f, re-verified on a grid.
std::optional<Vec> find_translate_below(const LogConcaveFn& f, const EllipsoidalFunction& g, const Box& search);

}  // namespace helly
