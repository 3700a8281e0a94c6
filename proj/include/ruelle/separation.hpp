#pragma once

#include <Eigen/Dense>
#include <vector>

#include "ruelle/cones.hpp"
#include "ruelle/multiplier_bank.hpp"

namespace ruelle {

struct BandIndex {
  int n = 0;
  int sector = 0;
};

// The frequency transitions realized by the linearized dynamics: whether a
// source band (l, j) of Theta can feed the target band (n, i) of Theta'.
// `a` is a lower bound for the smallest singular value of the transposed
// derivatives, `c` a pinch constant for the flow cones (|xi_{d+1}| >= c|xi|
// on C_f and C_f').
bool band_transition_related(const WeightSpec& spec, BandIndex source,
                             BandIndex target, double a, double c);

struct SeparationResult {
  enum class Status { ok, related_pair, below_threshold };
  Status status = Status::ok;
  double distance = 0.0;  // sampled min distance of the two supports
  double scale = 0.0;     // max(2^{n^{a_i}}, 2^{l^{a_j}})
  double ratio = 0.0;     // distance / scale
};

// Sampled distance between supp psi_{Theta',n,i} and the image of
// supp psi~_{Theta,l,j} under the transposed derivatives, for unrelated
// pairs with max(n,l) above the threshold.  a_i = alpha on the slow sectors
// and 1 otherwise.
SeparationResult support_separation(
    const WeightSpec& spec, const ConeSystem& theta, const ConeSystem& theta_p,
    const AngularPartition& angular, const AngularPartition& angular_p,
    const std::vector<Eigen::MatrixXd>& dt, BandIndex target, BandIndex source,
    int threshold = 8, int samples = 2000);

// Support point clouds used by the separation check (exposed for tests).
std::vector<Eigen::VectorXd> band_support_points(const WeightSpec& spec,
                                                 const ConeSystem& theta,
                                                 const AngularPartition& ang,
                                                 BandIndex band, bool enlarged,
                                                 int samples);

}  // namespace ruelle
