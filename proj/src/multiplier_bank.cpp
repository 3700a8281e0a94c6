#include "ruelle/multiplier_bank.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <stdexcept>

#include "ruelle/bump.hpp"
#include "ruelle/sampling.hpp"

namespace ruelle {

namespace {
constexpr double kApertureShrink = 0.05;  // keeps supp phi_i inside int C_i
constexpr double kVanishMargin = 0.10;    // width of the C_{i+2} dead zone

double pow2(double e) { return std::exp2(e); }
}  // namespace

WeightSpec::WeightSpec(double alpha_, int r_, int d_, double nu_, double t0_,
                       int b_)
    : alpha(alpha_), r(r_), d(d_), nu(nu_), b(b_), t0(t0_) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("WeightSpec: alpha outside (0,1)");
  if (r < 2) throw std::invalid_argument("WeightSpec: r < 2");
  if (d < 1) throw std::invalid_argument("WeightSpec: d < 1");
  if (!(nu > 0.0)) throw std::invalid_argument("WeightSpec: nu <= 0");
  if (!(t0 > 0.0)) throw std::invalid_argument("WeightSpec: t0 <= 0");
  if (b == 0)
    b = smallest_enlargement_offset(alpha);
  else if (!enlargement_offset_valid(alpha, b))
    throw std::invalid_argument("enlargement too small");
}

double WeightSpec::beta(int sector) const {
  if (sector == kSectorF || sector == r - 1) return -double(d + 2);
  if (sector == 0) return double(d + 2);
  if (sector >= 1 && sector <= r - 2) return -double(sector + 1) * (d + 2);
  throw std::invalid_argument("WeightSpec::beta: bad sector");
}

std::vector<int> WeightSpec::sectors() const {
  std::vector<int> s;
  for (int i = 0; i < r; ++i) s.push_back(i);
  s.push_back(kSectorF);
  return s;
}

bool enlargement_offset_valid(double alpha, int b, int n_check) {
  if (b < 1) return false;
  // n = 0 slow band is supported in |xi| <= 2^{1^a} + 1 = 3 and its enlarged
  // companion equals 1 up to 2^{b^a} + 1/2.
  if (pow2(std::pow(double(b), alpha)) + 0.5 < 3.0) return false;
  for (int n = 1; n <= n_check; ++n) {
    const double up = pow2(std::pow(double(n + 1), alpha)) -
                      pow2(std::pow(double(n + b), alpha)) + 1.0;
    if (up > 0.5) return false;
    if (n > b) {
      const double lo = pow2(std::pow(double(n), alpha)) -
                        pow2(std::pow(double(n - b), alpha));
      if (lo < 1.0) return false;
    }
  }
  return true;
}

int smallest_enlargement_offset(double alpha) {
  for (int b = 1; b <= 64; ++b)
    if (enlargement_offset_valid(alpha, b)) return b;
  throw std::runtime_error("smallest_enlargement_offset: none up to 64");
}

RadialCutoffs radial_cutoffs(int n, double alpha, double xi_norm) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("radial_cutoffs: alpha outside (0,1)");
  if (xi_norm < 0.0)
    throw std::invalid_argument("radial_cutoffs: negative norm");
  auto chi_n = [&](int m) {
    return m >= 1 ? chi_cutoff(std::ldexp(xi_norm, -m)) : 0.0;
  };
  auto chi_an = [&](int m) {
    return m >= 1 ? chi_cutoff(xi_norm - pow2(std::pow(double(m), alpha)))
                  : 0.0;
  };
  RadialCutoffs rc;
  rc.chi_n = chi_n(n);
  rc.chi_alpha_n = chi_an(n);
  rc.psi_n = n >= 0 ? chi_n(n + 1) - chi_n(n) : 0.0;
  rc.psi_alpha_n = n >= 0 ? chi_an(n + 1) - chi_an(n) : 0.0;
  return rc;
}

AngularPartition::AngularPartition(const ConeSystem& theta,
                                   int validation_samples)
    : theta_(theta), r_(theta.r()) {
  if (r_ < 2) throw std::invalid_argument("AngularPartition: r < 2");
  // The shrunken supports must still cover the sphere, otherwise the
  // normalizing denominator in phi() vanishes somewhere.
  double min_denom = 1e300;
  for (const auto& w : sphere_points(validation_samples, theta_.dim())) {
    double denom = 0.0;
    for (int i = 0; i < r_; ++i) denom += raw(i, w);
    denom += raw(kSectorF, w);
    min_denom = std::min(min_denom, denom);
  }
  if (!(min_denom > 1e-8))
    throw std::invalid_argument(
        "AngularPartition: shrunken cone supports do not cover the sphere");
}

double AngularPartition::ratio(int sector, const Eigen::VectorXd& omega) const {
  const Cone& c = theta_.sector_cone(sector);
  const auto [core, perp] = c.split_norms(omega);
  if (c.aperture * core <= 0.0) return 1e300;
  return perp / (c.aperture * core);
}

double AngularPartition::raw(int sector, const Eigen::VectorXd& omega) const {
  const double s = ratio(sector, omega);
  double v = s >= 1e290 ? 0.0 : chi_cutoff((1.0 + kApertureShrink) * s);
  if (v == 0.0) return 0.0;
  if (sector >= 1 && sector <= r_ - 2) {
    // dead zone around C_{sector+2}
    const Cone& deep = theta_.chain[sector + 1];  // C_{sector+2}
    const auto [core, perp] = deep.split_norms(omega);
    const double sd =
        deep.aperture * core > 0.0 ? perp / (deep.aperture * core) : 1e300;
    v *= smooth_up(std::min(sd, 1e10), 1.0 + kVanishMargin,
                   1.0 + 2.0 * kVanishMargin);
  } else if (sector == kSectorF) {
    const Cone& c2 = theta_.chain[1];
    const auto [core, perp] = c2.split_norms(omega);
    const double sd =
        c2.aperture * core > 0.0 ? perp / (c2.aperture * core) : 1e300;
    v *= smooth_up(std::min(sd, 1e10), 1.0 + kVanishMargin,
                   1.0 + 2.0 * kVanishMargin);
  }
  return v;
}

double AngularPartition::phi(int sector, const Eigen::VectorXd& omega) const {
  const double num = raw(sector, omega);
  if (num == 0.0) return 0.0;
  double denom = 0.0;
  for (int i = 0; i < r_; ++i) denom += raw(i, omega);
  denom += raw(kSectorF, omega);
  return num / denom;
}

double AngularPartition::phi_tilde(int sector,
                                   const Eigen::VectorXd& omega) const {
  const double s = std::min(ratio(sector, omega), 1e10);
  double v = smooth_down(s, 1.0 / (1.0 + kApertureShrink),
                         1.0 / (1.0 + 0.5 * kApertureShrink));
  if (v == 0.0) return 0.0;
  auto dead_zone = [&](const Cone& deep) {
    const auto [core, perp] = deep.split_norms(omega);
    const double sd =
        deep.aperture * core > 0.0 ? perp / (deep.aperture * core) : 1e300;
    return smooth_up(std::min(sd, 1e10), 1.0 + 0.5 * kVanishMargin,
                     1.0 + kVanishMargin);
  };
  if (sector >= 1 && sector <= r_ - 2) v *= dead_zone(theta_.chain[sector + 1]);
  else if (sector == kSectorF) v *= dead_zone(theta_.chain[1]);
  return v;
}

namespace {
void check_band_args(const WeightSpec& spec, const ConeSystem& theta,
                     int n, int sector) {
  if (theta.r() != spec.r)
    throw std::invalid_argument("band_function: spec.r != theta.r");
  if (n < 0) throw std::invalid_argument("band_function: n < 0");
  if (!(sector == kSectorF || (sector >= 0 && sector <= spec.r - 1)))
    throw std::invalid_argument("band_function: sector outside {0..r-1, f}");
}
}  // namespace

double band_function(const WeightSpec& spec, const ConeSystem& theta,
                     const AngularPartition& angular, int n, int sector,
                     const Eigen::VectorXd& xi) {
  check_band_args(spec, theta, n, sector);
  const double rho = xi.norm();
  const RadialCutoffs rc = radial_cutoffs(n, spec.alpha, rho);
  const double psi0 = radial_cutoffs(0, spec.alpha, rho).psi_n;
  if (spec.slow_scale(sector)) {
    const double radial = (1.0 - psi0) * rc.psi_alpha_n;
    if (radial == 0.0 || rho == 0.0) return 0.0;
    return radial * angular.phi(sector, xi / rho);
  }
  if (n == 0) return psi0 / double(spec.r - 1);
  if (rc.psi_n == 0.0 || rho == 0.0) return 0.0;
  return rc.psi_n * angular.phi(sector, xi / rho);
}

double enlarged_band_function(const WeightSpec& spec, const ConeSystem& theta,
                              const AngularPartition& angular, int n,
                              int sector, const Eigen::VectorXd& xi) {
  check_band_args(spec, theta, n, sector);
  const double rho = xi.norm();
  auto chi_n = [&](int m) {
    return m >= 1 ? chi_cutoff(std::ldexp(rho, -m)) : 0.0;
  };
  auto chi_an = [&](int m) {
    return m >= 1 ? chi_cutoff(rho - pow2(std::pow(double(m), spec.alpha)))
                  : 0.0;
  };
  if (spec.slow_scale(sector)) {
    const double radial = chi_an(n + spec.b) - chi_an(n - spec.b);
    if (n == 0) return chi_an(spec.b);
    if (radial == 0.0 || rho == 0.0) return 0.0;
    return radial * angular.phi_tilde(sector, xi / rho);
  }
  if (n == 0) return chi_n(2);
  const double radial = chi_n(n + 2) - chi_n(n - 1);
  if (radial == 0.0 || rho == 0.0) return 0.0;
  return radial * angular.phi_tilde(sector, xi / rho);
}

std::vector<BandValue> band_values(const WeightSpec& spec,
                                   const ConeSystem& theta,
                                   const AngularPartition& angular,
                                   const Eigen::VectorXd& xi) {
  const double rho = xi.norm();
  std::vector<BandValue> out;
  const double psi0 = radial_cutoffs(0, spec.alpha, rho).psi_n;
  if (psi0 > 0.0) {
    for (int i = 1; i <= spec.r - 2; ++i)
      out.push_back({0, i, psi0 / double(spec.r - 1)});
    out.push_back({0, kSectorF, psi0 / double(spec.r - 1)});
  }
  if (rho == 0.0) return out;
  const Eigen::VectorXd omega = xi / rho;

  // Dyadic candidates: supp psi_n is [2^{n-1}, 2^{n+1}].
  const int nc = std::max(1, int(std::floor(std::log2(std::max(rho, 1.0)))));
  for (int n = std::max(1, nc - 1); n <= nc + 2; ++n) {
    const double psin = radial_cutoffs(n, spec.alpha, rho).psi_n;
    if (psin == 0.0) continue;
    for (int i = 1; i <= spec.r - 2; ++i) {
      const double v = psin * angular.phi(i, omega);
      if (v > 0.0) out.push_back({n, i, v});
    }
    const double vf = psin * angular.phi(kSectorF, omega);
    if (vf > 0.0) out.push_back({n, kSectorF, vf});
  }

  // Slow-scale candidates: supp psi_{a,n} is (2^{n^a}, 2^{(n+1)^a} + 1).
  if (psi0 < 1.0) {
    const double x = std::log2(std::max(rho, 1.0));
    const int n_top =
        int(std::ceil(std::pow(std::max(x, 0.0), 1.0 / spec.alpha))) + 1;
    for (int n = n_top; n >= 0; --n) {
      if (n < n_top &&
          pow2(std::pow(double(n + 1), spec.alpha)) + 1.0 < rho)
        break;
      const double psian = radial_cutoffs(n, spec.alpha, rho).psi_alpha_n;
      if (psian == 0.0) continue;
      for (int i : {0, spec.r - 1}) {
        const double v = (1.0 - psi0) * psian * angular.phi(i, omega);
        if (v > 0.0) out.push_back({n, i, v});
      }
    }
  }
  return out;
}

double weight_w(const WeightSpec& spec, const ConeSystem& theta,
                const AngularPartition& angular, const Eigen::VectorXd& xi) {
  if (theta.r() != spec.r)
    throw std::invalid_argument("weight_w: spec.r != theta.r");
  const double rho = xi.norm();
  const double psi0 = radial_cutoffs(0, spec.alpha, rho).psi_n;
  if (rho == 0.0 || psi0 >= 1.0) return psi0;
  const Eigen::VectorXd omega = xi / rho;
  const double l1p = std::log1p(rho);
  const double stretch_base =
      std::pow(l1p, 1.0 / spec.alpha) /
      std::pow(std::log(2.0), 1.0 / spec.alpha - 1.0);
  double sectors = 0.0;
  for (int i : spec.sectors()) {
    const double p = angular.phi(i, omega);
    if (p == 0.0) continue;
    if (spec.slow_scale(i))
      sectors += p * std::exp(spec.beta(i) * stretch_base);
    else
      sectors += p * std::pow(jbracket(rho), spec.beta(i));
  }
  return psi0 + (1.0 - psi0) * sectors;
}

double isotropic_weight(double alpha, double beta, std::int64_t n) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("isotropic_weight: alpha outside (0,1)");
  const double a = std::llabs(n);
  return std::exp(beta * std::pow(std::log1p(a), 1.0 / alpha));
}

FrequencyLattice::FrequencyLattice(int dim_, int radius_)
    : dim(dim_), radius(radius_) {
  if (dim < 1 || radius < 0)
    throw std::invalid_argument("FrequencyLattice: bad dimensions");
}

std::size_t FrequencyLattice::size() const {
  std::size_t n = 1;
  for (int a = 0; a < dim; ++a) n *= std::size_t(2 * radius + 1);
  return n;
}

std::size_t FrequencyLattice::index(const Eigen::VectorXi& xi) const {
  std::size_t idx = 0;
  for (int a = 0; a < dim; ++a) {
    if (std::abs(xi[a]) > radius)
      throw std::out_of_range("FrequencyLattice::index: outside lattice");
    idx = idx * std::size_t(2 * radius + 1) + std::size_t(xi[a] + radius);
  }
  return idx;
}

Eigen::VectorXi FrequencyLattice::point(std::size_t idx) const {
  Eigen::VectorXi xi(dim);
  for (int a = dim - 1; a >= 0; --a) {
    xi[a] = int(idx % std::size_t(2 * radius + 1)) - radius;
    idx /= std::size_t(2 * radius + 1);
  }
  return xi;
}

bool FrequencyLattice::inside(const Eigen::VectorXi& xi) const {
  for (int a = 0; a < dim; ++a)
    if (std::abs(xi[a]) > radius) return false;
  return true;
}

BandCoefficients random_band_coefficients(const FrequencyLattice& lat,
                                          const WeightSpec& spec,
                                          const ConeSystem& theta,
                                          const AngularPartition& angular,
                                          int n, int sector, int max_points,
                                          std::uint64_t seed) {
  BandCoefficients bc;
  bc.n = n;
  bc.sector = sector;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  // Radial support bounds of the band.
  double r_lo, r_hi;
  if (spec.slow_scale(sector)) {
    r_lo = n == 0 ? 0.0 : pow2(std::pow(double(n), spec.alpha));
    r_hi = pow2(std::pow(double(n + 1), spec.alpha)) + 1.0;
  } else if (n == 0) {
    r_lo = 0.0;
    r_hi = 2.0;
  } else {
    r_lo = std::ldexp(1.0, n - 1);
    r_hi = std::ldexp(1.0, n + 1);
  }
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  const double reach = std::min(r_hi, double(lat.radius) * std::sqrt(lat.dim));
  int found = 0, attempts = 0;
  while (found < max_points && attempts < 200 * max_points) {
    ++attempts;
    Eigen::VectorXi xi(lat.dim);
    for (int a = 0; a < lat.dim; ++a)
      xi[a] = int(std::lround(unif(rng) * reach));
    if (!lat.inside(xi)) continue;
    const double rho = xi.cast<double>().norm();
    if (rho < r_lo || rho > r_hi) continue;
    if (band_function(spec, theta, angular, n, sector, xi.cast<double>()) <=
        0.0)
      continue;
    bc.coef.push_back({lat.index(xi), cplx(gauss(rng), gauss(rng))});
    ++found;
  }
  return bc;
}

std::vector<std::pair<int, int>> bands_touching(const WeightSpec& spec,
                                                double rmax) {
  std::vector<std::pair<int, int>> out;
  const int n_dyadic = std::max(0, int(std::floor(std::log2(std::max(rmax, 1.0)))) + 1);
  for (int n = 0; n <= n_dyadic; ++n) {
    for (int i = 1; i <= spec.r - 2; ++i) out.push_back({n, i});
    out.push_back({n, kSectorF});
  }
  const double x = std::log2(std::max(rmax, 1.0));
  const int n_slow =
      int(std::ceil(std::pow(std::max(x, 0.0), 1.0 / spec.alpha))) + 1;
  for (int n = 0; n <= n_slow; ++n)
    for (int i : {0, spec.r - 1}) out.push_back({n, i});
  return out;
}

double norm_sobolev(const FrequencyLattice& lat,
                    const std::vector<std::pair<std::size_t, cplx>>& u,
                    const WeightSpec& spec, const ConeSystem& theta,
                    const AngularPartition& angular) {
  double s = 0.0;
  for (const auto& [idx, v] : u) {
    const double w =
        weight_w(spec, theta, angular, lat.point(idx).cast<double>());
    s += std::norm(v) * w * w;
  }
  return std::sqrt(s);
}

double norm_littlewood_paley(const FrequencyLattice& lat,
                             const std::vector<std::pair<std::size_t, cplx>>& u,
                             const WeightSpec& spec, const ConeSystem& theta,
                             const AngularPartition& angular) {
  // Accumulate |psi_{n,i} u|_2^2 per band by visiting each coefficient once.
  std::map<std::pair<int, int>, double> band_l2;
  for (const auto& [idx, v] : u) {
    const Eigen::VectorXd xi = lat.point(idx).cast<double>();
    for (const BandValue& bv : band_values(spec, theta, angular, xi))
      band_l2[{bv.n, bv.sector}] += sqr(bv.value) * std::norm(v);
  }
  double s = 0.0;
  for (const auto& [band, l2] : band_l2) {
    const double factor = std::exp2(band.first * spec.beta(band.second));
    s += factor * factor * l2;
  }
  return std::sqrt(s);
}

}  // namespace ruelle
