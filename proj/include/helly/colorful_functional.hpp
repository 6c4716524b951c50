#pragma once

#include "helly/functional_helly.hpp"
#include "helly/john_function.hpp"
#include "helly/log_bound.hpp"
#include "helly/logconcave.hpp"

#include <optional>
#include <string>
#include <vector>

namespace helly {

using Family = std::vector<LogConcaveFn>;

// min(f, r h_ball(./r)).
LogConcaveFn clamp_function(const LogConcaveFn& f, double r);
std::vector<Family> clamp_families(const std::vector<Family>& families, double r);

// h1 is lower than h2 when its maximum is smaller.
inline bool lower_than(const EllipsoidalFunction& h1, const EllipsoidalFunction& h2) { return h1.alpha < h2.alpha; }

struct LowestOptions {
  JohnOptions john;
  int max_steps = 40;
  double rel_tol = 1e-7;
  // Relative shortfall of the John integral below target still accepted.
  double target_slack = 1e-6;
};

// Some ellipsoidal function below f with integral equal to target whose
// maximum is within rel_tol of the least possible; nullopt when the John
// function of f has smaller integral than target (up to target_slack).
std::optional<EllipsoidalFunction> lowest_ellipsoidal(const LogConcaveFn& f, double target,
                                                      const LowestOptions& opt = {});
// Whether some ellipsoidal function below min(f, t) has integral >= target,
// i.e. the lowest ellipsoidal function has maximum at most t.
bool lowest_height_at_most(const LogConcaveFn& f, double target, double t, const JohnOptions& opt = {});

// delta (delta/4)^d h_ball((4/delta) x).
EllipsoidalFunction hellyklee_shrink(double delta, int d);

struct HellyKleeCheck {
  // Eigenvalues of the base map of h.
  Vec betas;
  bool betas_within = false;
  // g(. + translate) <= h.
  Vec translate;
  double margin = 0.0;
  double grid_excess = 0.0;
  bool translate_verified = false;
};
HellyKleeCheck check_hellyklee(const EllipsoidalFunction& h, double delta);

enum class TranslateStatus { Found, Inconclusive, Violation };

struct TranslateSelection {
  TranslateStatus status = TranslateStatus::Inconclusive;
  int cls = -1;
  Vec translate;
  // Member index per class of a rainbow pick without a common translate.
  std::vector<int> violating_pick;
  std::string hint;
};

// A class whose minimum lies above a translate g(. + a), for d+1 classes
// whose rainbow minima all do. Translates a are searched in the given box on
// a grid of about grid_points probes, then refined.
TranslateSelection colorful_translate_select(const std::vector<Family>& classes, const EllipsoidalFunction& g,
                                             const Box& search, int grid_points = 0);

enum class ColorfulStatus { Selected, HypothesisViolation, Inconclusive };

struct ColorfulOptions {
  double clamp_radius = 100.0;
  double theta = 4.0;
  bool check_hypothesis = true;
  int grid_points = 0;
  JohnOptions john;
};

struct ColorfulResult {
  ColorfulStatus status = ColorfulStatus::Inconclusive;
  int cls = -1;
  // Below the minimum of class cls in the original coordinates.
  EllipsoidalFunction witness;
  double witness_log_integral = -std::numeric_limits<double>::infinity();
  double witness_excess = 0.0;
  bool witness_verified = false;
  double delta = 0.0;
  // log integral of the witness implied by the worst-case chain.
  LogBound log_integral_bound;
  // Classes and members of the rainbow selection whose lowest ellipsoidal
  // function is highest.
  std::vector<int> base_classes;
  std::vector<int> base_pick;
  // On violation: classes and member indices of the offending selection.
  std::vector<int> violating_classes;
  std::vector<int> violating_pick;
  std::vector<std::string> trace;
};

// 3d+1 classes; certified for d = 1, best effort for d = 2.
ColorfulResult colorful_select(const std::vector<Family>& families, const ColorfulOptions& opt = {});

// The hypothesis: every rainbow selection from 2d+1 distinct classes has a
// minimum whose John function integrates to more than that of h_ball.
// Returns the first violating selection, if any.
struct RainbowPick {
  std::vector<int> classes;
  std::vector<int> members;
};
std::optional<RainbowPick> find_hypothesis_violation(const std::vector<Family>& families, const JohnOptions& opt = {});

}  // namespace helly
