#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "ruelle/common.hpp"

namespace ruelle {

// Closed symmetric cone {xi : |xi_perp| <= aperture * |xi_core|} in frame
// coordinates.  The frame is orthonormal with the core directions in the
// first core_dim columns.  Aperture 0 gives the core subspace itself.
struct Cone {
  Eigen::MatrixXd frame;
  int core_dim = 1;
  double aperture = 0.0;

  Cone() = default;
  Cone(Eigen::MatrixXd frame_, int core_dim_, double aperture_);

  int dim() const { return int(frame.rows()); }
  // Norms of the core/perp parts of xi in frame coordinates.
  std::pair<double, double> split_norms(const Eigen::VectorXd& xi) const;

  // Axis-aligned cone with core spanned by the given coordinate axes.
  static Cone axis(int dim, std::vector<int> core_axes, double aperture);
  // Cone whose core is the span of the given (orthonormal) columns, with the
  // frame completed arbitrarily.
  static Cone around(const Eigen::MatrixXd& core_cols, double aperture);
};

// Membership, scale-invariant; contains(c, 0) is always true.
bool contains(const Cone& c, const Eigen::VectorXd& xi, double tol = 0.0);

// Exact euclidean distance from a point to the cone:
// max(0, |p_perp| - m |p_core|) / sqrt(1 + m^2).
double cone_distance(const Cone& c, const Eigen::VectorXd& p);

// aperture*|u_core| - |u_perp|; positive iff xi lies in the open interior.
double interior_margin(const Cone& c, const Eigen::VectorXd& xi);

// Deterministic unit-vector samples of the cone (core sphere x perp sphere x
// opening-ratio grid, boundary included).
std::vector<Eigen::VectorXd> cone_unit_samples(const Cone& c, int samples);

// closure(inner) subset of interior(outer) union {0}.  Exact aperture
// comparison when the cones share a core; low-discrepancy boundary sampling
// with margin 1e-6 otherwise.  samples >= 100.
bool strictly_nested(const Cone& inner, const Cone& outer, int samples);

// min distance between the unit sphere of one cone and the other cone,
// symmetrized; 0 when the cones share a ray.  samples >= 1000.
double transverse_gap(const Cone& a, const Cone& b, int samples);

// The r+2 cones (C_0, C_1..C_r, C_f) with the flow direction e.
struct ConeSystem {
  Cone c0;
  std::vector<Cone> chain;  // C_1 ... C_r
  Cone cf;
  Eigen::VectorXd flow_dir;
  int du = 1, ds = 1;

  int r() const { return int(chain.size()); }
  int dim() const { return c0.dim(); }
  // Cone attached to a multiplier sector: 0 -> C_0, 1..r-1 -> C_1..C_{r-1},
  // kSectorF -> C_f.
  const Cone& sector_cone(int sector) const;
};

// Sector tag for the flow sector, alongside 0..r-1.
inline constexpr int kSectorF = -1;

struct SystemViolation {
  int condition;  // 1..5, numbering the definition's items
  std::string detail;
};

struct SystemReport {
  bool ok = false;
  std::vector<SystemViolation> violations;
};

// Verifies the five conditions of the cone-system definition; covering by
// sphere sampling with margin 1e-6, transversality via transverse_gap > 0.
SystemReport is_cone_system(const ConeSystem& theta, int samples);

struct ConeHyperbolicityReport {
  bool holds = false;
  double Lambda = 0.0;  // largest constant passing (iii)+(iv)
  struct Witness {
    int condition;  // 1..4
    int matrix_index;
    Eigen::VectorXd xi;
  };
  std::vector<Witness> witnesses;
};

// Cone hyperbolicity of the transposed derivatives `dt` (one matrix per
// sample point of the base set) from the system `theta` into `theta_p`:
//  (i)   dt(C_i) inside C'_{min(i+2,r)} for i = 1..r
//  (ii)  dt(C_f) meets C'_0 only at 0
//  (iii) |dt xi| >= Lambda |xi| on C_{r-1}
//  (iv)  |dt xi| <= |xi|/Lambda whenever dt xi lands in C'_0.
ConeHyperbolicityReport cone_hyperbolic(
    const std::vector<Eigen::MatrixXd>& dt, const ConeSystem& theta,
    const ConeSystem& theta_p, int samples);

// Model systems for a hyperbolic toral automorphism suspended by a constant
// roof: frequency space R^3 with coordinates (base^2, flow).
struct ConeSystemPair {
  ConeSystem theta;
  ConeSystem theta_p;
};

// A pair (Theta, Theta') of valid r=4 systems adapted to the transposed
// derivative diag(A^tr, 1); the apertures are tuned so that both systems
// satisfy the full definition and the derivative is cone-hyperbolic from
// Theta to Theta' with Lambda >= 2 whenever the expansion factor of A is at
// least the golden-cat value (3+sqrt(5))/2.
ConeSystemPair builder_for_toral_suspension(const Eigen::Matrix2d& A);

// Both systems equal, every cone with the same aperture around the
// eigendirections of A^tr and the flow axis.  Not a valid covering system;
// used to probe the hyperbolicity predicate on the linear model.
ConeSystemPair eigen_frame_systems(const Eigen::Matrix2d& A, double aperture,
                                   int r = 4);

// diag(A^tr, 1): the transposed derivative of the suspension's time-t maps.
Eigen::MatrixXd suspension_dt_transpose(const Eigen::Matrix2d& A);

// Plain-text serialization (frame rows, apertures, flow direction).
std::string serialize(const ConeSystem& theta);
ConeSystem parse_cone_system(const std::string& text);

}  // namespace ruelle
