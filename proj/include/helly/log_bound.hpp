#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

namespace helly {

// A nonnegative quantity stored as its natural logarithm.
class LogBound {
 public:
  LogBound() = default;
  static LogBound from_log(double lv) { return LogBound(lv); }
  static LogBound from_value(double v) {
    if (v < 0.0) throw std::invalid_argument("LogBound: negative value");
    return LogBound(v == 0.0 ? -std::numeric_limits<double>::infinity() : std::log(v));
  }
  static LogBound zero() { return LogBound(-std::numeric_limits<double>::infinity()); }
  static LogBound one() { return LogBound(0.0); }

  double log_value() const { return lv_; }
  // exp(log_value); may overflow to inf, callers that need the number opt in.
  double value() const { return std::exp(lv_); }

  LogBound operator*(const LogBound& o) const { return LogBound(lv_ + o.lv_); }
  LogBound operator/(const LogBound& o) const { return LogBound(lv_ - o.lv_); }
  LogBound pow(double p) const { return LogBound(lv_ == -std::numeric_limits<double>::infinity() ? lv_ : p * lv_); }
  LogBound operator+(const LogBound& o) const {
    const double hi = std::max(lv_, o.lv_), lo = std::min(lv_, o.lv_);
    if (hi == -std::numeric_limits<double>::infinity()) return zero();
    return LogBound(hi + std::log1p(std::exp(lo - hi)));
  }
  bool operator<(const LogBound& o) const { return lv_ < o.lv_; }
  bool operator<=(const LogBound& o) const { return lv_ <= o.lv_; }

 private:
  explicit LogBound(double lv) : lv_(lv) {}
  double lv_ = -std::numeric_limits<double>::infinity();
};

}  // namespace helly
