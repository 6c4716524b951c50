#pragma once

#include "helly/colorful_functional.hpp"
#include "helly/diameter_helly.hpp"
#include "helly/functional_helly.hpp"
#include "helly/logconcave.hpp"
#include "helly/polytope.hpp"

#include "json.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace helly {

using json = nlohmann::json;

json to_json(const Vec& v);
json to_json(const Mat& m);
json to_json(const HPolytope& P);
json to_json(const EllipsoidalFunction& g);
json to_json(const LogConcaveFn& f);
json to_json(const SelectionCertificate& c);
json to_json(const ColorfulResult& r);
json to_json(const DiameterSelectResult& r);

Vec vec_from_json(const json& j);
Mat mat_from_json(const json& j);
HPolytope hpolytope_from_json(const json& j);
LogConcaveFn fn_from_json(const json& j);

ColorFamilies diameter_instance(const json& inst);
std::vector<LogConcaveFn> func_instance(const json& inst);
std::vector<Family> colorful_instance(const json& inst);

// FNV-1a of the compact dump, as 16 hex digits.
std::string instance_hash(const json& inst);

struct GenParams {
  std::string kind;  // diameter-colorful | func-helly | colorful-func
  int d = 1;
  // func-helly: number of functions.
  int n = 5;
  // Sets per class (diameter-colorful) or maximum class size (colorful-func).
  int sets = 3;
  // Number of classes; 0 picks 2d (diameter) or 3d+1 (colorful-func).
  int classes = 0;
  std::uint64_t seed = 1;
  // diameter-colorful: replace one set by a far-away small one.
  bool inject_violation = false;
};

// Deterministic per seed. Diameter instances share a common box in every
// set; function instances share a common core region, so the hypotheses
// hold by construction.
json generate_instance(const GenParams& p);

// Exhaustive oracles at desk scale. Kinds: subset-ratio (func-helly,
// n <= 12), steinitz ({"points": ...}, n <= 12), rainbow-diameter
// (at most 4096 rainbows), quadrature (func-helly). Throws
// PreconditionError above the limits.
json run_oracle(const std::string& kind, const json& inst);

struct ExperimentConfig {
  std::string kind;  // func-helly | diameter-colorful | colorful-func | steinitz
  int d = 1;
  int trials = 0;
  std::uint64_t seed = 1;
  int n = 5;
  int sets = 3;
  double tol = 1e-9;
  // diameter-colorful: every other trial gets an injected violation.
  bool inject = false;
  bool plot = false;
};
// Throws PreconditionError on an empty or invalid config.
ExperimentConfig experiment_config_from_json(const json& j);

struct ExperimentResult {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  int passed = 0;
};

// Trials run on up to thread_count() threads with seed + trial per trial;
// rows are ordered by trial index.
ExperimentResult run_experiment(const ExperimentConfig& cfg);
std::string to_csv(const ExperimentResult& r);
// Scatter of two numeric columns, one point per row.
std::string scatter_svg(const ExperimentResult& r, const std::string& xcol, const std::string& ycol);

// HELLY_THREADS if set, else the hardware concurrency.
int thread_count();

}  // namespace helly
