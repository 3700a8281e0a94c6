#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <utility>
#include <vector>

#include "ruelle/cones.hpp"
#include "ruelle/common.hpp"

namespace ruelle {

// Parameters of the anisotropic weight and its band decomposition.  Sectors
// 0..r-1 and f index the angular pieces; sectors 0 and r-1 live on the
// slow 2^{n^alpha} radial scale, the others on the dyadic scale.
struct WeightSpec {
  double alpha;  // in (0,1)
  int r;         // >= 2 angular chain length
  int d;         // base dimension, ambient D = d+1
  double nu;     // transition-relation slope, 0 < nu
  int b;         // enlargement offset of the slow-scale cutoffs
  double t0;     // flow shift used by the determinant factorization

  WeightSpec(double alpha_, int r_, int d_, double nu_ = 1.0,
             double t0_ = 1.0, int b_ = 0);  // b_ == 0: smallest valid

  double beta(int sector) const;
  bool slow_scale(int sector) const { return sector == 0 || sector == r - 1; }
  std::vector<int> sectors() const;  // {0,...,r-1, kSectorF}
};

// Smallest b >= 1 such that, for all n >= 1,
//   2^{(n+1)^a} - 2^{(n+b)^a} + 1 <= 1/2   and   2^{n^a} - 2^{(n-b)^a} >= 1,
// and the n = 0 slow band is dominated as well.
int smallest_enlargement_offset(double alpha);
bool enlargement_offset_valid(double alpha, int b, int n_check = 65536);

struct RadialCutoffs {
  double chi_n, chi_alpha_n, psi_n, psi_alpha_n;
};

// chi_n = chi(2^{-n}|xi|), chi_{a,n} = chi(|xi| - 2^{n^a}), both zero for
// n <= 0; psi_n = chi_{n+1} - chi_n and psi_{a,n} = chi_{a,n+1} - chi_{a,n}.
RadialCutoffs radial_cutoffs(int n, double alpha, double xi_norm);

// Angular partition of unity subordinate to a cone system: phi_i supported
// inside C_i, phi_i (i = 1..r-2) and phi_f vanishing near C_{i+2} and C_2,
// and enlarged companions with phi_i != 0 => phi_tilde_i = 1.
class AngularPartition {
 public:
  AngularPartition(const ConeSystem& theta, int validation_samples = 4096);

  double phi(int sector, const Eigen::VectorXd& omega) const;
  double phi_tilde(int sector, const Eigen::VectorXd& omega) const;
  int r() const { return r_; }

 private:
  double ratio(int sector, const Eigen::VectorXd& omega) const;
  double raw(int sector, const Eigen::VectorXd& omega) const;

  ConeSystem theta_;
  int r_;
};

// psi_{Theta,n,i}(xi).  Dyadic sectors use psi_n (n>=1) and psi_0/(r-1) at
// n = 0; slow sectors use (1 - psi_0) psi_{alpha,n}.  Values in [0,1] and
// the family sums to 1 over all (n, sector).
double band_function(const WeightSpec& spec, const ConeSystem& theta,
                     const AngularPartition& angular, int n, int sector,
                     const Eigen::VectorXd& xi);

// Enlarged band: equals 1 wherever the matching band_function is nonzero.
double enlarged_band_function(const WeightSpec& spec, const ConeSystem& theta,
                              const AngularPartition& angular, int n,
                              int sector, const Eigen::VectorXd& xi);

// All (n, sector) pairs with band_function(xi) != 0, with values.
struct BandValue {
  int n;
  int sector;
  double value;
};
std::vector<BandValue> band_values(const WeightSpec& spec,
                                   const ConeSystem& theta,
                                   const AngularPartition& angular,
                                   const Eigen::VectorXd& xi);

// The anisotropic weight w_{Theta,alpha}: stretched-exponential factor
// exp(beta ln(1+|xi|)^{1/a}/(ln 2)^{1/a - 1}) on the slow sectors,
// <xi>^beta on the dyadic ones, glued by psi_0 at low frequency.
double weight_w(const WeightSpec& spec, const ConeSystem& theta,
                const AngularPartition& angular, const Eigen::VectorXd& xi);

// exp(beta ln(1+|n|)^{1/alpha}), the circle-model weight.
double isotropic_weight(double alpha, double beta, std::int64_t n);

// Integer frequency lattice {xi : |xi|_inf <= radius} in Z^dim, row-major.
struct FrequencyLattice {
  int dim;
  int radius;

  FrequencyLattice(int dim_, int radius_);
  std::size_t size() const;
  std::size_t index(const Eigen::VectorXi& xi) const;
  Eigen::VectorXi point(std::size_t idx) const;
  bool inside(const Eigen::VectorXi& xi) const;
};

// Coefficients supported on (part of) one band.
struct BandCoefficients {
  int n = 0;
  int sector = 0;
  std::vector<std::pair<std::size_t, cplx>> coef;  // (lattice index, value)
};

BandCoefficients random_band_coefficients(const FrequencyLattice& lat,
                                          const WeightSpec& spec,
                                          const ConeSystem& theta,
                                          const AngularPartition& angular,
                                          int n, int sector, int max_points,
                                          std::uint64_t seed);

// Bands whose support meets the ball |xi| <= rmax.
std::vector<std::pair<int, int>> bands_touching(const WeightSpec& spec,
                                                double rmax);

// sqrt( sum |u(xi)|^2 w(xi)^2 ) over the listed coefficients (unit cells).
double norm_sobolev(const FrequencyLattice& lat,
                    const std::vector<std::pair<std::size_t, cplx>>& u,
                    const WeightSpec& spec, const ConeSystem& theta,
                    const AngularPartition& angular);

// sqrt( sum_{n,i} (2^{n beta_i} |psi_{Theta,n,i} u|_2)^2 ).
double norm_littlewood_paley(const FrequencyLattice& lat,
                             const std::vector<std::pair<std::size_t, cplx>>& u,
                             const WeightSpec& spec, const ConeSystem& theta,
                             const AngularPartition& angular);

}  // namespace ruelle
