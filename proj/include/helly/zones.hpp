#pragma once

#include "helly/linalg.hpp"
#include "helly/polytope.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace helly {

// {u in S^{d-1} : |<u, axis>| <= half_width}
struct Zone {
  Vec axis;
  double half_width = 0.0;
};

// Sampled subset of the witness set {u : width_K(u) <= lambda}, stored
// symmetrically.
struct WitnessSample {
  double lambda = 0.0;
  std::vector<Vec> directions;
  int dim() const { return directions.empty() ? 0 : static_cast<int>(directions.front().size()); }
};

// Widths of a fixed body. Uses cached vertices when d <= 3, LPs otherwise.
class WidthOracle {
 public:
  explicit WidthOracle(const HPolytope& K);
  double operator()(const Vec& u) const;
  bool empty() const { return empty_; }

 private:
  HPolytope K_;
  Mat V_;  // d x n vertex matrix when cached
  bool cached_ = false;
  bool empty_ = false;
};

bool witness_membership(const HPolytope& K, const Vec& u, double lambda);

WitnessSample sample_witness_set(const HPolytope& K, double lambda, int N, std::uint64_t seed);
// Same, with the widths supplied by a prebuilt oracle.
WitnessSample sample_witness_set(const WidthOracle& widths, int d, double lambda, int N, std::uint64_t seed);

double zone_measure_bound(const Zone& z);

// Axis minimizing max_u |<u, x>| over unit x: sphere-grid seeding followed by
// an LP descent on the tangent plane.
Zone min_covering_zone(const WitnessSample& S);

bool symmetric_hull_contains_ball(const WitnessSample& S, double omega);

struct DiameterCertificate {
  bool issued = false;
  double bound = 0.0;
  Zone zone;
};
DiameterCertificate diameter_certificate(const HPolytope& K, double lambda, const WitnessSample& S);

double cap_diameter_bound(double phi);
double cap_width_bound(double phi);

}  // namespace helly
