#pragma once

#include <cmath>
#include <numbers>
#include <utility>

namespace rsf {

/// cos/sin of an angle in degrees, exact at multiples of 45 degrees so that
/// axis-aligned and diagonal fringes land on integer coordinates without drift.
inline std::pair<double, double> exact_cos_sin(double deg) {
  if (deg == 0.0) return {1.0, 0.0};
  if (deg == 90.0) return {0.0, 1.0};
  if (deg == -90.0) return {0.0, -1.0};
  const double h = std::sqrt(0.5);
  if (deg == 45.0) return {h, h};
  if (deg == -45.0) return {h, -h};
  const double rad = deg * std::numbers::pi / 180.0;
  return {std::cos(rad), std::sin(rad)};
}

}  // namespace rsf
