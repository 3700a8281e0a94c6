#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

#include "ruelle/common.hpp"

namespace ruelle {

namespace detail {
// Gauss-Legendre nodes/weights on [-1,1].
struct GaussRule {
  std::vector<double> x, w;
};

const GaussRule& gauss10();
const GaussRule& gauss21();
}  // namespace detail

// Adaptive Gauss quadrature of a complex-valued integrand on [a,b].
// Panels are accepted when the 10- and 21-point estimates agree within the
// panel's share of the absolute tolerance; otherwise they are bisected.
cplx integrate_adaptive(const std::function<cplx(double)>& f, double a,
                        double b, double abs_tol, int initial_panels = 8,
                        int max_depth = 40);

// Fixed-order Gauss-Legendre on [a,b] (no adaptivity), 21 nodes.
cplx integrate_gauss21(const std::function<cplx(double)>& f, double a,
                       double b);

// Ein(w) = int_0^w (1 - e^{-s})/s ds, entire; evaluated by power series for
// small |w| and by adaptive quadrature of the (removable-singular) integrand
// otherwise.
cplx ein(cplx w);

}  // namespace ruelle
