#pragma once

// Extended nonnegative reals: ordinary doubles plus the IEEE +inf sentinel.
// NaN never enters the library; inputs carrying it are rejected.

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>

namespace dyadic {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

inline bool is_infinite(double v) { return v == kInfinity; }

// a * b with the measure-theoretic convention 0 * inf = 0.
inline double saturating_mul(double a, double b) {
  if (a == 0.0 || b == 0.0) return 0.0;
  return a * b;
}

// a / b with 0 / 0 = 0 (averages over null cubes).
inline double convention_ratio(double numerator, double denominator) {
  if (denominator == 0.0) return 0.0;
  if (is_infinite(denominator)) return is_infinite(numerator) ? kInfinity : 0.0;
  return numerator / denominator;
}

inline void require_not_nan(double v, std::string_view what) {
  if (std::isnan(v)) {
    throw std::invalid_argument(std::string(what) + ": NaN is not an admissible value");
  }
}

inline void require_nonnegative(double v, std::string_view what) {
  require_not_nan(v, what);
  if (v < 0.0) {
    throw std::invalid_argument(std::string(what) + ": negative value " + std::to_string(v));
  }
}

}  // namespace dyadic
