#include "ruelle/determinant.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "ruelle/quadrature.hpp"

namespace ruelle {

namespace {

// Per-period aggregates of count * (T#/T) e^{g} e^{-sT} / |det(I-P)|,
// keyed by T (clustered to 1e-9).
std::map<double, cplx> period_aggregates(
    const std::vector<PeriodicOrbit>& orbits, cplx s, double T_max) {
  std::map<double, cplx> agg;
  for (const auto& po : orbits) {
    if (po.T > T_max + 1e-12) continue;
    const cplx term = double(po.count) * (po.T_primitive / po.T) *
                      std::exp(po.g_integral) * std::exp(-s * po.T) /
                      po.det_factor();
    auto it = agg.lower_bound(po.T - 1e-9);
    if (it != agg.end() && std::abs(it->first - po.T) < 1e-9)
      it->second += term;
    else
      agg[po.T] = term;
  }
  return agg;
}

double geometric_tail(const std::map<double, cplx>& agg) {
  // Bound the missing terms by continuing the last observed ratio; demand
  // an actually decaying sequence so the bound is meaningful.
  if (agg.size() < 3) return 1e300;
  auto it = agg.rbegin();
  const double a2 = std::abs(it->second);
  ++it;
  const double a1 = std::abs(it->second);
  ++it;
  const double a0 = std::abs(it->second);
  const double q = std::max(a2 / std::max(a1, 1e-300),
                            a1 / std::max(a0, 1e-300));
  if (!(q < 0.95)) return 1e300;
  return a2 * q / (1.0 - q);
}

}  // namespace

OrbitSumResult dg_orbit_sum(const std::vector<PeriodicOrbit>& orbits, cplx s,
                            double T_max, double abscissa) {
  if (!(s.real() > abscissa))
    throw std::invalid_argument("dg_orbit_sum: outside convergence half-plane");
  OrbitSumResult out;
  out.abscissa = abscissa;
  const auto agg = period_aggregates(orbits, s, T_max);
  cplx sum = 0.0;
  for (const auto& [T, v] : agg) sum += v;
  out.log_sum = -sum;
  out.value = std::exp(-sum);
  out.tail_bound = geometric_tail(agg);
  return out;
}

OrbitSumResult dg_orbit_sum_z(const std::vector<PeriodicOrbit>& orbits, cplx z,
                              int n_max, double radius_bound) {
  if (!(std::abs(z) < radius_bound))
    throw std::invalid_argument(
        "dg_orbit_sum_z: outside convergence disk");
  if (std::abs(z) == 0.0) {
    OrbitSumResult out;
    out.value = 1.0;
    out.tail_bound = 0.0;
    return out;
  }
  // e^{-sT} = z^T with T integer: reuse the continuous path with s = -log z.
  return dg_orbit_sum(orbits, -std::log(z), double(n_max),
                      -std::log(radius_bound) - 1e-12);
}

double convergence_abscissa(const CircleMap& map) {
  const double max_re_g =
      map.potential.empty() ? 0.0 : map.potential.max_re();
  return max_re_g + std::log(double(map.degree)) -
         std::log(map.min_derivative());
}

double convergence_abscissa(const ToralSuspension& sys) {
  // Fix(A^n) equals |det(I - A^n)| for these automorphisms, so the only
  // growth left is the potential.
  return sys.potential.empty() ? 0.0 : sys.potential.max_re();
}

std::vector<cplx> q_polynomial(cplx lambda, double t0, int d) {
  if (lambda == 0.0) throw std::invalid_argument("q_polynomial: lambda = 0");
  if (!(t0 > 0.0)) throw std::invalid_argument("q_polynomial: t0 <= 0");
  if (d < 0) throw std::invalid_argument("q_polynomial: d < 0");
  std::vector<cplx> c(std::size_t(d) + 2, 0.0);
  double kfact = 1.0;
  for (int k = 0; k <= d + 1; ++k) {
    if (k > 0) kfact *= k;
    cplx sum = 0.0;
    double nfact = kfact;  // n! starting at n = k
    for (int n = k; n <= d + 1; ++n) {
      if (n > k) nfact *= n;
      sum += nfact / (kfact * std::pow(lambda, n + 1) *
                      std::pow(t0, double(n + 1 - k)));
    }
    c[std::size_t(k)] = -sum;
  }
  return c;
}

namespace {
cplx horner(const std::vector<cplx>& c, cplx z) {
  cplx v = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * z + *it;
  return v;
}
}  // namespace

cplx hadamard_factor(cplx lambda, double t0, int d, cplx z) {
  return std::exp(hadamard_log_factor(lambda, t0, d, z));
}

cplx hadamard_log_deriv(cplx lambda, double t0, int d, cplx z) {
  if (lambda == 0.0) return std::exp(-t0 * z) / z;
  const cplx e = std::exp(-(z - lambda) * t0);
  cplx geom = 0.0;
  cplx zp = 1.0;
  for (int n = 0; n <= d + 1; ++n) {
    geom += zp / std::pow(lambda, n + 1);
    zp *= z;
  }
  return e * (1.0 / (z - lambda) + geom);
}

cplx hadamard_log_factor(cplx lambda, double t0, int d, cplx z) {
  if (!(t0 > 0.0)) throw std::invalid_argument("hadamard_log_factor: t0 <= 0");
  if (lambda == 0.0) {
    // log G_0 = Log z + Ein(t0) - Ein(t0 z); G_0(1) = 1.
    return std::log(z) + ein(cplx(t0)) - ein(t0 * z);
  }
  const std::vector<cplx> q = q_polynomial(lambda, t0, d);
  auto piece = [&](cplx w) {
    return std::log(1.0 - w / lambda) +
           horner(q, w) * std::exp(-(w - lambda) * t0) -
           ein((w - lambda) * t0);
  };
  return piece(z) - piece(0.0);
}

FactorizationFit factorization_residual(const DeterminantGrid& grid,
                                        const ResonanceSet& resonances,
                                        double t0, int d) {
  const std::size_t n = grid.points.size();
  if (n != grid.values.size() || n == 0)
    throw std::invalid_argument("factorization_residual: bad grid");
  const int ncoef = d + 4;  // log mu plus degrees 0..d+2

  // y(z) = log d_g(z) - sum_lambda log G_lambda(z), fit as
  // log mu + P(z) e^{-t0 z}; multiplied through by e^{t0 z} per the fit's
  // conditioning transform: y e^{t0 z} = log mu e^{t0 z} + P(z).
  Eigen::MatrixXcd A(n, ncoef);
  Eigen::VectorXcd yv(n);
  std::vector<cplx> log_prod(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const cplx z = grid.points[i];
    cplx lp = 0.0;
    for (const auto& res : resonances.entries)
      lp += double(res.multiplicity) *
            hadamard_log_factor(res.lambda, t0, d, z);
    log_prod[i] = lp;
    const cplx e = std::exp(t0 * z);
    yv(i) = (std::log(grid.values[i]) - lp) * e;
    A(i, 0) = e;
    cplx zp = 1.0;
    for (int k = 0; k <= d + 2; ++k) {
      A(i, k + 1) = zp;
      zp *= z;
    }
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A,
                                         Eigen::ComputeThinU | Eigen::ComputeThinV);
  const double cond = svd.singularValues()(0) /
                      svd.singularValues()(svd.singularValues().size() - 1);
  if (cond > 1e10)
    throw std::runtime_error("factorization_residual: ill-conditioned fit");
  const Eigen::VectorXcd coef = svd.solve(yv);

  FactorizationFit fit;
  fit.condition = cond;
  fit.log_mu = coef(0);
  fit.P.assign(coef.data() + 1, coef.data() + ncoef);
  fit.max_residual = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const cplx z = grid.points[i];
    const cplx model = std::exp(fit.log_mu + horner(fit.P, z) *
                                                 std::exp(-t0 * z) +
                                log_prod[i]);
    fit.max_residual =
        std::max(fit.max_residual, std::abs(grid.values[i] - model));
  }
  return fit;
}

ResolventOrbitCheck resolvent_orbit_identity(
    const ResonanceSet& resonances, const std::vector<PeriodicOrbit>& orbits,
    cplx z, double t0, int d, double orbits_T_max) {
  ResolventOrbitCheck out;
  // Resonance side.
  double lambda_max = 0.0;
  for (const auto& r : resonances.entries) {
    out.lhs += double(r.multiplicity) * std::exp(r.lambda * t0) /
               std::pow(z - r.lambda, d + 3);
    lambda_max = std::max(lambda_max, std::abs(r.lambda));
  }
  // Tail assuming the vertical-lattice asymptotics of the model sets: count
  // resonances per unit |Im| in the top decade and integrate the power law.
  {
    std::size_t top = 0;
    for (const auto& r : resonances.entries)
      if (std::abs(r.lambda) > 0.5 * lambda_max)
        top += std::size_t(r.multiplicity);
    const double density = double(top) / std::max(lambda_max, 1e-300);
    const double base = std::max(lambda_max - std::abs(z), 1.0);
    out.lhs_tail = 2.0 * density * std::exp(t0 * 0.0) /
                   (double(d + 2) * std::pow(base, d + 2));
  }
  // Orbit side.
  const double fact = std::tgamma(double(d + 3));
  std::map<double, double> agg_abs;
  for (const auto& po : orbits) {
    if (po.T > orbits_T_max + 1e-12) continue;
    if (po.T <= t0)
      throw std::invalid_argument(
          "resolvent_orbit_identity: t0 not below the shortest orbit");
    const cplx term = double(po.count) * po.T_primitive *
                      std::exp(po.g_integral) *
                      std::pow(po.T - t0, double(d + 2)) *
                      std::exp(-z * (po.T - t0)) / po.det_factor() / fact;
    out.rhs += term;
    const double w = double(po.count) * po.T_primitive *
                     std::exp(po.g_integral.real()) / po.det_factor();
    auto it = agg_abs.lower_bound(po.T - 1e-9);
    if (it != agg_abs.end() && std::abs(it->first - po.T) < 1e-9)
      it->second += w;
    else
      agg_abs[po.T] = w;
  }
  // Continue the per-period weights at the last observed level and sum the
  // explicit (T-t0)^{d+2} e^{-Re z (T-t0)} factors until they vanish.
  if (!agg_abs.empty() && agg_abs.size() >= 2) {
    auto it = agg_abs.rbegin();
    const double w_last = it->second;
    const double T_last = it->first;
    ++it;
    const double step = T_last - it->first;
    const double w_max = std::max(w_last, it->second);
    double tail = 0.0;
    for (int j = 1; j <= 100000; ++j) {
      const double T = T_last + j * step;
      const double term = w_max *
                          std::pow(T - t0, double(d + 2)) *
                          std::exp(-z.real() * (T - t0)) / fact;
      tail += term;
      if (term < 1e-30) break;
    }
    out.rhs_tail = tail;
  } else {
    out.rhs_tail = 1e300;
  }
  out.gap = std::abs(out.lhs - out.rhs);
  return out;
}

double order_estimate(const std::vector<double>& radii,
                      const std::vector<double>& max_modulus) {
  if (radii.size() != max_modulus.size() || radii.size() < 4)
    throw std::invalid_argument("order_estimate: need at least 4 radii");
  const auto [rmin, rmax] = std::minmax_element(radii.begin(), radii.end());
  if (*rmax < 10.0 * *rmin)
    throw std::invalid_argument("order_estimate: radii must span a decade");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < radii.size(); ++i) {
    const double x = std::log(radii[i]);
    const double y = std::log1p(std::max(0.0, std::log(max_modulus[i])));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = double(radii.size());
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace ruelle
