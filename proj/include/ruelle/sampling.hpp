#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace ruelle {

// Deterministic low-discrepancy samplers.  All pass/fail geometry checks in
// this project use these, so repeated runs agree bit for bit.

// k-th element of the van der Corput sequence in the given base.
double van_der_corput(std::uint64_t k, unsigned base);

// i-th Halton point in (0,1)^dim (bases 2,3,5,...), index offset by 1 to
// avoid the origin.
Eigen::VectorXd halton_point(std::uint64_t i, int dim);

// n unit vectors on S^{D-1}, low-discrepancy (Halton + inverse Gaussian map).
std::vector<Eigen::VectorXd> sphere_points(int n, int dim);

}  // namespace ruelle
