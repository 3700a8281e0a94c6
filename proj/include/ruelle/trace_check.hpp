#pragma once

#include <vector>

#include "ruelle/common.hpp"
#include "ruelle/models.hpp"
#include "ruelle/transfer.hpp"

namespace ruelle {

// Compactly supported bump amplitude * exp(-1/(1-u^2)), u = (t-center)/width,
// with closed-form derivatives of every order via the recursion
// h^{(k+1)} = sum_j C(k,j) h^{(j)} g^{(k+1-j)} for g = -1/(1-u^2).
class TestFunction {
 public:
  TestFunction(double center, double width, double amplitude = 1.0,
               int tail_order = 8);

  double center() const { return center_; }
  double width() const { return width_; }
  double amplitude() const { return amplitude_; }
  int tail_order() const { return tail_order_; }
  double support_lo() const { return center_ - width_; }
  double support_hi() const { return center_ + width_; }

  double value(double t) const { return deriv(0, t); }
  double deriv(int k, double t) const;   // d^k h / dt^k
  double bv_norm(int k) const;           // total variation of h^{(k)}
  double ck_norm(int k) const;           // max_{j<=k} sup |h^{(j)}|

  // Normalizing factor so that the integral of h is one.
  double integral() const;

 private:
  double center_, width_, amplitude_;
  int tail_order_;
};

// Lap(h)(-lambda) = int_0^inf e^{lambda t} h(t) dt, adaptive Gauss
// quadrature on the support to absolute tolerance 1e-12.
cplx laplace(const TestFunction& h, cplx lambda);

struct ResonanceSumResult {
  cplx value = 0.0;
  double tail = 0.0;  // integration-by-parts bound on the omitted terms
  std::size_t used = 0;
};

// Sum of multiplicity * Lap(h)(-lambda) over the K resonances of smallest
// |Im lambda| (deterministic order), with the tail estimated from
// |Lap(h)(-lambda)| <= e^{sup(supp h) max(Re lambda,0)} |h^{(k)}|_BV /
// |lambda|^{k+1} at k = h.tail_order().
ResonanceSumResult lhs_resonance_sum(const ResonanceSet& res,
                                     const TestFunction& h, int K);

// sum_gamma T# h(T) e^{int g} / |det(I-P)| over the orbit table; throws
// "orbit table short" if the table does not cover supp h.
cplx rhs_orbit_sum(const std::vector<PeriodicOrbit>& orbits,
                   const TestFunction& h, double table_T_max);

// Trace of int h(t) L_t dt on the truncated model, evaluated spectrally:
// sum over the resonances of the fiber truncation of Lap(h)(-lambda).
cplx operator_side_trace(const ToralSuspension& sys, const TestFunction& h,
                         int N, int k_max);

struct CountingTailReport {
  std::vector<std::size_t> K_list;
  std::vector<double> partial_sums;  // of e^{eps Re l}/(1+|l|^{d+1+eps})
  std::vector<double> increments;
  bool cauchy = false;  // increments below 1e-6 and decreasing
};

CountingTailReport counting_tail(const ResonanceSet& res, double epsilon,
                                 int d, const std::vector<std::size_t>& K_list);

}  // namespace ruelle
