#pragma once

#include <Eigen/Dense>

#include <vector>

namespace helly {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Absolute tolerance for comparisons of computed scalars.
inline constexpr double kTol = 1e-9;

inline Mat columns(const std::vector<Vec>& pts) {
  if (pts.empty()) return Mat(0, 0);
  Mat M(pts.front().size(), static_cast<Eigen::Index>(pts.size()));
  for (std::size_t i = 0; i < pts.size(); ++i) M.col(static_cast<Eigen::Index>(i)) = pts[i];
  return M;
}

}  // namespace helly
