#pragma once

#include "helly/log_bound.hpp"
#include "helly/polytope.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace helly {

struct ColorFamilies {
  int d = 0;
  std::vector<std::vector<HPolytope>> families;

  // Checks 2d nonempty classes of matching dimension.
  void validate() const;
};

struct RainbowSelection {
  std::vector<int> picks;
};

// Constants of the colorful diameter theorem, computed once per dimension.
struct DiameterConstants {
  int d;
  double delta;                 // 1/(2d^2)
  double hypothesis_threshold;  // (2d)^{2d}
  LogBound rainbow_count;       // (2d)^{2d}
  LogBound final_bound;         // 1/(2d^2 (2d)^{2d})
};
const DiameterConstants& diameter_constants(int d);

// Diameter of the intersection of the chosen sets; 0 when empty.
double intersection_diameter(const std::vector<HPolytope>& sets);

struct DirectionalResult {
  std::optional<int> class_index;
  std::optional<RainbowSelection> violation;
  double width = 0.0;  // width of the returned class or violating rainbow
};
DirectionalResult directional_colorful_check(const ColorFamilies& F, const Vec& u);

// Indices of a subfamily of size <= 2d whose intersection has diameter < 1.
std::vector<int> qhd_core_subfamily(const std::vector<HPolytope>& family, int d);

struct DiameterDiagnostic {
  std::vector<std::vector<int>> core_subfamilies;
  double lambda = 0.0;
  int samples = 0;
  bool samples_covered = false;  // every sampled direction lies in some witness set
  RainbowSelection r0;           // indices into the original classes
  double r0_measure = 0.0;
  double measure_threshold = 0.0;
  double omega = 0.0;
  double zone_bound = 0.0;
  double r0_diameter = 0.0;
  bool contradiction = false;  // r0 violates the hypothesis
};

// Runs the proof pipeline on classes whose intersections are all small.
DiameterDiagnostic diameter_diagnostic_trace(const ColorFamilies& F, int samples = 20000,
                                             std::uint64_t seed = 1);

// CounterexampleCandidate: the hypothesis held on every checked rainbow but no
// class intersection is large, which the theorem rules out.
enum class DiameterOutcome { ClassSelected, HypothesisViolation, CounterexampleCandidate };

struct DiameterSelectOptions {
  bool diagnostic = false;
  std::uint64_t seed = 1;
  double max_rainbows = 1e6;
  int sampled_rainbows = 100000;
  int diagnostic_samples = 20000;
};

struct DiameterSelectResult {
  DiameterOutcome outcome = DiameterOutcome::ClassSelected;
  int class_index = -1;
  double measured_diameter = 0.0;
  RainbowSelection violation;
  double violation_diameter = 0.0;
  bool complete = true;  // false when rainbows were sampled
  std::optional<DiameterDiagnostic> trace;
};

DiameterSelectResult colorful_diameter_select(const ColorFamilies& F, const DiameterSelectOptions& opt = {});

}  // namespace helly
