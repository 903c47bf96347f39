#pragma once

#include <cmath>

namespace spark {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Wraps an angle (or angle difference) to the canonical interval (-pi, pi].
/// IEEE remainder is exact, so inputs that differ by an exact multiple of
/// 2*pi wrap to bitwise-identical values.
inline double wrap_phi(double x) {
  double y = std::remainder(x, kTwoPi);
  if (y <= -kPi) y += kTwoPi;
  return y;
}

inline constexpr double deg_to_rad(double deg) { return deg * (kPi / 180.0); }
inline constexpr double rad_to_deg(double rad) { return rad * (180.0 / kPi); }

}  // namespace spark
