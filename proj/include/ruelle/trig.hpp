#pragma once

#include <array>
#include <map>
#include <vector>

#include "ruelle/common.hpp"

namespace ruelle {

// Trigonometric polynomial sum_k c_k e^{2 pi i k x} on the circle R/Z.
struct Trig1 {
  std::map<int, cplx> c;

  cplx eval(double x) const;
  cplx deriv(double x) const;  // d/dx
  bool is_real(double tol = 1e-12) const;
  double max_re(int grid = 4096) const;
  int max_freq() const;
  bool empty() const { return c.empty(); }

  static Trig1 constant(cplx v);
  static Trig1 coskx(int k, double amp);  // amp * cos(2 pi k x)
  static Trig1 sinkx(int k, double amp);  // amp * sin(2 pi k x)
};

// Trigonometric polynomial on the 2-torus, sum_k c_k e^{2 pi i <k,x>}.
struct Trig2 {
  std::map<std::array<int, 2>, cplx> c;

  cplx eval(double x0, double x1) const;
  bool is_real(double tol = 1e-12) const;
  double max_re(int grid = 256) const;
  int max_freq() const;
  bool empty() const { return c.empty(); }

  static Trig2 constant(cplx v);
  static Trig2 coskx(std::array<int, 2> k, double amp);
};

// Fourier coefficients of exp(scale * g) by discrete transform; the sample
// count doubles until the coefficients move by less than tol, which is
// reached quickly since the function is entire in x.
std::map<int, cplx> exp_fourier(const Trig1& g, cplx scale, int max_out,
                                double tol = 1e-13);
std::map<std::array<int, 2>, cplx> exp_fourier(const Trig2& g, cplx scale,
                                               int max_out,
                                               double tol = 1e-13);

}  // namespace ruelle
