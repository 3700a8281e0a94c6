#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "ruelle/common.hpp"
#include "ruelle/trig.hpp"

namespace ruelle {

using Matrix2ll = Eigen::Matrix<long long, 2, 2>;

// One periodic orbit (or an aggregate of identical ones, see count).
// For discrete-time systems T counts iterations; for suspensions T is the
// roof-weighted length.
struct PeriodicOrbit {
  double T = 0.0;
  double T_primitive = 0.0;
  Eigen::MatrixXd poincare;  // linearized return map
  cplx g_integral = 0.0;     // integral of the potential along the orbit
  long long count = 1;       // number of aggregated orbits with this data

  double det_factor() const;  // |det(I - poincare)|
};

// Degree-k covering map x -> kx + p(x) mod 1 with a trigonometric potential.
struct CircleMap {
  int degree = 2;
  Trig1 perturbation;  // real-valued trig polynomial p
  Trig1 potential;     // complex-valued g

  CircleMap(int degree_, Trig1 perturbation_ = {}, Trig1 potential_ = {});

  double lift(double x) const;        // kx + p(x)
  double lift_deriv(double x) const;  // k + p'(x)
  double min_derivative(int grid = 4096) const;
  bool unperturbed() const { return perturbation.empty(); }
};

// Constant-roof suspension of a hyperbolic toral automorphism.
struct ToralSuspension {
  Eigen::Matrix2i A;
  double roof = 1.0;
  Trig2 potential;  // g on the base torus, lifted constant in the roof

  ToralSuspension(Eigen::Matrix2i A_, double roof_, Trig2 potential_ = {});

  Matrix2ll power(int n) const;              // A^n in integer arithmetic
  long long fixed_point_count(int n) const;  // #Fix(A^n) = |tr A^n - 2|
  double abs_det_i_minus(int n) const;       // |det(I - A^n)|
};

// All periodic points of f^n for n <= n_max, grouped into primitive orbits.
// Points are found one per branch word by bisection of the strictly
// increasing lift; the unperturbed map takes the exact rational shortcut.
std::vector<PeriodicOrbit> enumerate_orbits_circle(const CircleMap& map,
                                                   int n_max);

// Orbits of the suspension with T = n * roof <= T_max.  For each n the
// fixed points of A^n are grouped by primitive period via Moebius counting
// (exact in integer arithmetic); non-constant potentials additionally need
// the lattice points themselves, which limits n to moderate sizes.
std::vector<PeriodicOrbit> enumerate_orbits_suspension(
    const ToralSuspension& sys, double T_max);

// Exact lattice solutions of (A^n - I) x in Z^2, as base-torus points.
std::vector<Eigen::Vector2d> lattice_fixed_points(const ToralSuspension& sys,
                                                  int n);

// Integral of g along one discrete orbit through the given points (period =
// number of points); the suspension version scales by the roof.
cplx orbit_weight(const std::vector<double>& orbit_points, const Trig1& g);
cplx orbit_weight(const std::vector<Eigen::Vector2d>& orbit_points,
                  const Trig2& g, double roof);

// sum over orbits with T = n*roof of T_primitive / |det(I - P)|, in units of
// the roof; equals #Fix(A^n)/|det(I - A^n)| = 1 when the potential vanishes.
double orbit_identity_check(const ToralSuspension& sys, int n);

}  // namespace ruelle
