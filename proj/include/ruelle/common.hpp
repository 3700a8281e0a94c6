#pragma once

#include <complex>
#include <vector>

namespace ruelle {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

inline double sqr(double x) { return x * x; }

// <xi> = sqrt(1 + |xi|^2), the Japanese bracket of a norm.
inline double jbracket(double r) { return std::sqrt(1.0 + r * r); }

}  // namespace ruelle
