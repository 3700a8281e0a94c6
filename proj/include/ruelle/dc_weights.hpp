#pragma once

#include <vector>

#include "ruelle/common.hpp"

namespace ruelle {

// Parameters of the weight sequence A_m = exp(m^upsilon / kappa).
struct CarlemanParams {
  double kappa;
  double upsilon;

  CarlemanParams(double kappa_, double upsilon_);

  // upsilon/(upsilon-1), the exponent governing Fourier decay.
  double decay_exponent() const { return upsilon / (upsilon - 1.0); }
};

// log A_m = m^upsilon / kappa; comparisons are done on this scale since A_m
// overflows doubles already for moderate m.
double log_carleman_weight(int m, const CarlemanParams& p);
double carleman_weight(int m, const CarlemanParams& p);

// True iff A_m^2 <= A_{m-1} A_{m+1} for all 1 <= m <= m_max (log scale).
bool log_convexity_check(const CarlemanParams& p, int m_max);

// Complex samples on a uniform grid over a box in R^dim, row-major.
struct SampledFunction {
  int dim = 1;
  std::vector<double> lo;    // box corner, size dim
  double h = 1.0;            // grid spacing, same on every axis
  std::vector<int> shape;    // points per axis, size dim
  std::vector<cplx> values;  // shape[0]*...*shape[dim-1] entries, row-major
  int max_deriv_order = 0;

  void validate() const;
  std::size_t size() const;
  std::vector<double> point(const std::vector<int>& idx) const;

  static SampledFunction line(double a, double b, int n, int max_deriv = 0);
};

// sup over grid points x, |alpha| <= alpha_cap, m <= m_cap of
//   (1+|x|)^m |D^alpha f(x)| exp(-(m+|alpha|)^upsilon / kappa),
// with D^alpha from fourth-order centered differences.  A lower bound for
// the continuum seminorm.
double seminorm_estimate(const SampledFunction& f, const CarlemanParams& p,
                         int m_cap, int alpha_cap);

// True iff |fhat(xi)| <= C * seminorm * exp(-R ln(1+|xi|)^{u/(u-1)}) at every
// grid point of fhat.
bool fourier_decay_check(const SampledFunction& fhat, double seminorm,
                         const CarlemanParams& p, double R, double C);

// Smallest C (to relative accuracy ~1e-12, by bisection) for which the decay
// check above passes.
double min_decay_constant(const SampledFunction& fhat, double seminorm,
                          const CarlemanParams& p, double R);

}  // namespace ruelle
