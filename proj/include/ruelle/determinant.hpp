#pragma once

#include <vector>

#include "ruelle/common.hpp"
#include "ruelle/models.hpp"
#include "ruelle/transfer.hpp"

namespace ruelle {

// Orbit-sum evaluation of the dynamical determinant
//   d_g(s) = exp(-sum_gamma (T#/T) e^{int g} e^{-sT} / |det(I-P)|)
// truncated at T <= T_max, with a geometric tail estimate from the observed
// per-period aggregates.
struct OrbitSumResult {
  cplx value = 1.0;
  cplx log_sum = 0.0;     // the truncated exponent sum (with its sign)
  double tail_bound = 0.0;  // bound on the missing |log| mass
  double abscissa = 0.0;
};

// Re(s) must exceed `abscissa` (the caller's recorded convergence bound,
// e.g. max Re g for a constant-roof suspension).
OrbitSumResult dg_orbit_sum(const std::vector<PeriodicOrbit>& orbits, cplx s,
                            double T_max, double abscissa);

// Discrete-time variant in the variable z = e^{-s}; T are iteration counts.
OrbitSumResult dg_orbit_sum_z(const std::vector<PeriodicOrbit>& orbits, cplx z,
                              int n_max, double radius_bound);

// Convergence abscissas for the model systems.
double convergence_abscissa(const CircleMap& map);
double convergence_abscissa(const ToralSuspension& sys);

// Coefficients (degree 0..d+1) of the polynomial Q with
//   (Q(z) e^{-(z-lambda) t0})' = sum_{n=0}^{d+1} z^n/lambda^{n+1}
//                                 e^{-(z-lambda) t0},
// namely Q = -sum_k [ sum_{n=k}^{d+1} n!/(k! lambda^{n+1} t0^{n+1-k}) ] z^k.
std::vector<cplx> q_polynomial(cplx lambda, double t0, int d);

// The entire factor with a simple zero at lambda, normalized to G(0) = 1:
//   G(z) = (1 - z/lambda) exp(Q(z) e^{-(z-lambda) t0}) exp(-Ein((z-lambda)t0))
// divided by its value at 0.  For lambda = 0 the logarithmic-primitive
// branch G_0(z) = z exp(Ein(t0) - Ein(t0 z)) is used (so G_0(1) = 1).
cplx hadamard_factor(cplx lambda, double t0, int d, cplx z);

// G'/G: e^{-(z-l)t0} (1/(z-l) + sum_{n=0}^{d+1} z^n / l^{n+1}); for l = 0,
// e^{-t0 z}/z.
cplx hadamard_log_deriv(cplx lambda, double t0, int d, cplx z);

// A branch of log G assembled from the principal logs of the factors;
// smooth in z away from the ray {t*lambda : t >= 1}.
cplx hadamard_log_factor(cplx lambda, double t0, int d, cplx z);

struct DeterminantGrid {
  std::vector<cplx> points;
  std::vector<cplx> values;
  std::vector<double> tails;  // per-point truncation bounds (may be empty)
  double cutoff = 0.0;        // T_max used to produce the values
};

struct FactorizationFit {
  cplx log_mu = 0.0;
  std::vector<cplx> P;        // degree <= d+2 coefficients, ascending
  double max_residual = 0.0;  // max |d_g - mu exp(P e^{-t0 z}) prod G|
  double condition = 0.0;     // of the least-squares design matrix
};

// Least-squares fit of log mu and P from
//   log d_g(z) - sum_lambda log G_lambda(z) = log mu + P(z) e^{-t0 z}
// over the grid; throws on condition > 1e10.
FactorizationFit factorization_residual(const DeterminantGrid& grid,
                                        const ResonanceSet& resonances,
                                        double t0, int d);

struct ResolventOrbitCheck {
  cplx lhs = 0.0;  // sum_lambda e^{lambda t0} / (z-lambda)^{d+3}
  cplx rhs = 0.0;  // orbit side with (T-t0)^{d+2} e^{-z(T-t0)} / (d+2)!
  double lhs_tail = 0.0;
  double rhs_tail = 0.0;
  double gap = 0.0;  // |lhs - rhs|
};

ResolventOrbitCheck resolvent_orbit_identity(const ResonanceSet& resonances,
                                             const std::vector<PeriodicOrbit>& orbits,
                                             cplx z, double t0, int d,
                                             double orbits_T_max);

// Order of an entire function from max-modulus samples on circles:
// least-squares slope of log(1 + log+ M(r)) against log r.  Needs at least
// four radii spanning a decade.
double order_estimate(const std::vector<double>& radii,
                      const std::vector<double>& max_modulus);

}  // namespace ruelle
