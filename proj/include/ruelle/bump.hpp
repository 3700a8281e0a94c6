#pragma once

#include <cmath>
#include <stdexcept>

namespace ruelle {

// Smooth cutoff built from exp(-1/t) glue: chi(x) = 1 for x <= 1/2 and
// chi(x) = 0 for x >= 1, strictly decreasing in between.  All radial and
// angular localizers in this project are derived from this single function.
inline double glue(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }

inline double chi_cutoff(double x) {
  if (x <= 0.5) return 1.0;
  if (x >= 1.0) return 0.0;
  const double a = glue(1.0 - x);
  const double b = glue(x - 0.5);
  return a / (a + b);
}

// 1 on (-inf, t0], 0 on [t1, +inf).
inline double smooth_down(double t, double t0, double t1) {
  if (!(t1 > t0)) throw std::invalid_argument("smooth_down: need t0 < t1");
  return chi_cutoff(0.5 + 0.5 * (t - t0) / (t1 - t0));
}

// 0 on (-inf, t0], 1 on [t1, +inf).
inline double smooth_up(double t, double t0, double t1) {
  return 1.0 - smooth_down(t, t0, t1);
}

}  // namespace ruelle
