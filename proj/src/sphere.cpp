#include "helly/sphere.hpp"

#include <cmath>
#include <stdexcept>

namespace helly {

Vec random_unit(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Vec v(d);
  do {
    for (int i = 0; i < d; ++i) v(i) = g(rng);
  } while (v.norm() < 1e-12);
  return v / v.norm();
}

std::vector<Vec> sphere_grid(int d, int n) {
  if (d < 1 || n < 1) throw std::invalid_argument("sphere_grid: bad arguments");
  std::vector<Vec> out;
  if (d == 1) {
    out.push_back(Vec::Constant(1, 1.0));
    out.push_back(Vec::Constant(1, -1.0));
    return out;
  }
  out.reserve(static_cast<std::size_t>(n));
  if (d == 2) {
    for (int i = 0; i < n; ++i) {
      double t = 2.0 * M_PI * i / n;
      Vec v(2);
      v << std::cos(t), std::sin(t);
      out.push_back(v);
    }
    return out;
  }
  if (d == 3) {
    const double golden = M_PI * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < n; ++i) {
      double z = 1.0 - (2.0 * i + 1.0) / n;
      double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      double t = golden * i;
      Vec v(3);
      v << r * std::cos(t), r * std::sin(t), z;
      out.push_back(v);
    }
    return out;
  }
  std::mt19937_64 rng(0x9e3779b97f4a7c15ULL + static_cast<unsigned>(d));
  for (int i = 0; i < n; ++i) out.push_back(random_unit(d, rng));
  return out;
}

std::vector<Vec> hemisphere_grid(int d, int n) {
  if (d == 1) return {Vec::Constant(1, 1.0)};
  if (d == 2) {
    std::vector<Vec> out;
    for (int i = 0; i < n; ++i) {
      double t = M_PI * i / n;
      Vec v(2);
      v << std::cos(t), std::sin(t);
      out.push_back(v);
    }
    return out;
  }
  std::vector<Vec> out;
  for (const auto& v : sphere_grid(d, 2 * n))
    if (v(d - 1) > 0 || (v(d - 1) == 0 && v(0) >= 0)) out.push_back(v);
  return out;
}

}  // namespace helly
