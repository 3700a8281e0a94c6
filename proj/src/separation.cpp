#include "ruelle/separation.hpp"

#include <cmath>
#include <stdexcept>

#include "ruelle/sampling.hpp"

namespace ruelle {

namespace {
bool slow(const WeightSpec& spec, int sector) { return spec.slow_scale(sector); }

bool in_chain_range(const WeightSpec& spec, int sector, int lo, int hi) {
  return sector != kSectorF && sector >= lo && sector <= hi;
}
}  // namespace

bool band_transition_related(const WeightSpec& spec, BandIndex source,
                             BandIndex target, double a, double c) {
  if (!(a > 0.0) || !(c > 0.0))
    throw std::invalid_argument("band_transition_related: need a, c > 0");
  const int j = source.sector, i = target.sector;
  const double l = double(source.n), n = double(target.n);
  const double am1 = 1.0 - spec.alpha;

  if (i == 0 && j == 0) return l >= n + spec.nu * std::pow(n, am1);
  if (i == spec.r - 1 && j == spec.r - 1)
    return n >= l + spec.nu * std::pow(l, am1);
  if (j == 0 && (i == kSectorF || (i >= 1 && i <= spec.r - 1))) return true;
  const bool j_mid = j == kSectorF || in_chain_range(spec, j, 1, spec.r - 2);
  if (j_mid && i == spec.r - 1)
    return l <= std::pow(n, spec.alpha) + 4.0 - std::log2(a);
  if (j_mid && in_chain_range(spec, i, 1, spec.r - 2) &&
      (j == kSectorF || i >= j + 1))
    return n >= l - 4.0 + std::log2(a);
  if (i == kSectorF && j == kSectorF)
    return std::abs(l - n) <= 10.0 - std::log2(c);
  return false;
}

std::vector<Eigen::VectorXd> band_support_points(const WeightSpec& spec,
                                                 const ConeSystem& theta,
                                                 const AngularPartition& ang,
                                                 BandIndex band, bool enlarged,
                                                 int samples) {
  const int D = theta.dim();
  // Radial support window.
  double r_lo, r_hi;
  if (slow(spec, band.sector)) {
    if (enlarged) {
      r_lo = band.n > spec.b
                 ? std::exp2(std::pow(double(band.n - spec.b), spec.alpha)) + 0.5
                 : 0.0;
      r_hi = std::exp2(std::pow(double(band.n + spec.b), spec.alpha)) + 1.0;
    } else {
      r_lo = band.n >= 1 ? std::exp2(std::pow(double(band.n), spec.alpha)) : 1.0;
      r_hi = std::exp2(std::pow(double(band.n + 1), spec.alpha)) + 1.0;
      r_lo = std::max(r_lo, 1.0);  // the (1 - psi_0) factor kills |xi| <= 1
    }
  } else {
    if (enlarged) {
      r_lo = band.n >= 2 ? std::ldexp(1.0, band.n - 2) : 0.0;
      r_hi = std::ldexp(1.0, band.n + 2);
    } else {
      r_lo = band.n >= 1 ? std::ldexp(1.0, band.n - 1) : 0.0;
      r_hi = band.n >= 1 ? std::ldexp(1.0, band.n + 1) : 2.0;
    }
  }

  // Angular support: sphere points where the (enlarged) sector function is
  // positive; the n = 0 bands have no angular factor.
  const bool no_angular = band.n == 0 && !slow(spec, band.sector);
  std::vector<Eigen::VectorXd> dirs;
  const int want_dirs = std::max(8, samples / 16);
  for (const auto& w : sphere_points(samples * 4, D)) {
    const double p = no_angular
                         ? 1.0
                         : (enlarged ? ang.phi_tilde(band.sector, w)
                                     : ang.phi(band.sector, w));
    if (p > 0.0) {
      dirs.push_back(w);
      if (int(dirs.size()) >= want_dirs) break;
    }
  }
  if (dirs.empty())
    throw std::runtime_error("band_support_points: empty angular support");

  const int n_rad = std::max(4, samples / std::max(1, int(dirs.size())));
  std::vector<Eigen::VectorXd> pts;
  pts.reserve(dirs.size() * std::size_t(n_rad));
  for (int ir = 0; ir < n_rad; ++ir) {
    const double rho =
        r_lo + (r_hi - r_lo) * (double(ir) + 0.5) / double(n_rad);
    if (rho <= 0.0) continue;
    for (const auto& w : dirs) pts.push_back(rho * w);
  }
  return pts;
}

SeparationResult support_separation(
    const WeightSpec& spec, const ConeSystem& theta, const ConeSystem& theta_p,
    const AngularPartition& angular, const AngularPartition& angular_p,
    const std::vector<Eigen::MatrixXd>& dt, BandIndex target, BandIndex source,
    int threshold, int samples) {
  SeparationResult res;
  // Pinch constant of the two flow cones and the singular-value floor.
  double a = 1e300;
  for (const auto& M : dt) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
    a = std::min(a, svd.singularValues().minCoeff());
  }
  double c = 1e300;
  for (const Cone* cf : {&theta.cf, &theta_p.cf}) {
    const double pinch = 1.0 / std::sqrt(1.0 + sqr(cf->aperture));
    c = std::min(c, pinch);
  }

  if (band_transition_related(spec, source, target, a, c)) {
    res.status = SeparationResult::Status::related_pair;
    return res;
  }
  if (std::max(source.n, target.n) <= threshold) {
    res.status = SeparationResult::Status::below_threshold;
    return res;
  }

  const auto tgt = band_support_points(spec, theta_p, angular_p, target,
                                       /*enlarged=*/false, samples);
  const auto src = band_support_points(spec, theta, angular, source,
                                       /*enlarged=*/true, samples);
  double d2_min = 1e300;
  for (const auto& M : dt) {
    std::vector<Eigen::VectorXd> img;
    img.reserve(src.size());
    for (const auto& p : src) img.push_back(M * p);
    for (const auto& q : tgt)
      for (const auto& p : img) d2_min = std::min(d2_min, (q - p).squaredNorm());
  }
  res.distance = std::sqrt(d2_min);
  const double ai = slow(spec, target.sector) ? spec.alpha : 1.0;
  const double aj = slow(spec, source.sector) ? spec.alpha : 1.0;
  res.scale = std::max(std::exp2(std::pow(double(target.n), ai)),
                       std::exp2(std::pow(double(source.n), aj)));
  res.ratio = res.distance / res.scale;
  return res;
}

}  // namespace ruelle
