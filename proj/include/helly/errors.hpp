#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace helly {

class HellyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Requested an exact routine above the dimension it supports.
class UnsupportedDimension : public HellyError {
 public:
  UnsupportedDimension(int d, int max_d)
      : HellyError("dimension " + std::to_string(d) + " exceeds exact limit " +
                   std::to_string(max_d) + "; use the direction-sampling path"),
        dim(d) {}
  int dim;
};

class InfeasibleError : public HellyError {
 public:
  using HellyError::HellyError;
};

class PreconditionError : public HellyError {
 public:
  using HellyError::HellyError;
};

// The LP basis matrix could not be inverted.
class SingularBasisError : public HellyError {
 public:
  explicit SingularBasisError(std::vector<int> idx)
      : HellyError(describe(idx)), basis(std::move(idx)) {}
  std::vector<int> basis;

 private:
  static std::string describe(const std::vector<int>& idx) {
    std::string s = "numerically singular LP basis {";
    for (std::size_t i = 0; i < idx.size(); ++i) s += (i ? "," : "") + std::to_string(idx[i]);
    return s + "}";
  }
};

// Points do not affinely span the ambient space.
class DegenerateSpanError : public HellyError {
 public:
  DegenerateSpanError(int deficiency, int d)
      : HellyError("points span an affine subspace of dimension " + std::to_string(d - deficiency) +
                   " in R^" + std::to_string(d) + " (deficient by " + std::to_string(deficiency) +
                   ")"),
        deficient_dims(deficiency) {}
  int deficient_dims;
};

// A search that a cited theorem guarantees to succeed came back empty.
class CounterexampleCandidate : public HellyError {
 public:
  using HellyError::HellyError;
};

class UncertifiedError : public HellyError {
 public:
  using HellyError::HellyError;
};

}  // namespace helly
