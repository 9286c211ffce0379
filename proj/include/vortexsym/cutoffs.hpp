#pragma once

#include <cmath>

namespace vortexsym {

// Smooth transition: 0 for s <= 0, 1 for s >= 1.
inline double smooth_step(double s) {
  if (s <= 0.0) return 0.0;
  if (s >= 1.0) return 1.0;
  double a = std::exp(-1.0 / s);
  double b = std::exp(-1.0 / (1.0 - s));
  return a / (a + b);
}

// Phi_0: 1 on (-inf, -2], supported in (-inf, -1).
inline double phi0(double v) { return smooth_step(-1.0 - v); }

// Phi_*: 1 on [-2, 2], supported in (-4, 4).
inline double phi_star(double v) { return smooth_step((4.0 - std::abs(v)) / 2.0); }

// varrho: 1 on [0, 1/8], supported in [0, 4).
inline double varrho(double r) { return smooth_step((4.0 - r) / (4.0 - 0.125)); }

}  // namespace vortexsym
