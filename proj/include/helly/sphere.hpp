#pragma once

#include "helly/linalg.hpp"

#include <random>
#include <vector>

namespace helly {

// Uniform direction on S^{d-1} via a normalized Gaussian vector.
Vec random_unit(int d, std::mt19937_64& rng);

// Deterministic near-uniform directions: the circle at d=2, a Fibonacci
// lattice at d=3, {+-1} at d=1, seeded random points above.
std::vector<Vec> sphere_grid(int d, int n);

// Half of sphere_grid: one representative of each +-pair (used when the
// objective is even).
std::vector<Vec> hemisphere_grid(int d, int n);

}  // namespace helly
