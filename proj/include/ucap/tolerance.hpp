#pragma once

#include <algorithm>
#include <cmath>

namespace ucap {

inline constexpr double kTolerance = 1e-9;

// Relative above magnitude 1, absolute below.
inline double tolerance_for(double magnitude) {
  return kTolerance * std::max(1.0, std::abs(magnitude));
}

inline bool approx_le(double a, double b) { return a <= b + tolerance_for(std::max(std::abs(a), std::abs(b))); }

inline bool approx_eq(double a, double b) { return std::abs(a - b) <= tolerance_for(std::max(std::abs(a), std::abs(b))); }

}  // namespace ucap
