#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "ruelle/common.hpp"
#include "ruelle/models.hpp"
#include "ruelle/multiplier_bank.hpp"

namespace ruelle {

// Which side of the duality a matrix represents: the Koopman operator
// u -> e^g (u o f), or the averaging transfer operator
// u -> sum_{f(y)=x} e^{g(y)} u(y) / |f'(y)|.  On Fourier coefficients the
// transfer matrix is the conjugate transpose of the Koopman matrix with
// conjugated potential.
enum class Convention { koopman, transfer };

struct TransferMatrix {
  int N = 0;  // truncation radius of the frequency lattice
  int lattice_dim = 1;
  Convention convention = Convention::transfer;
  Eigen::MatrixXcd entries;
  std::string weight;  // description of the diagonal conjugation, or "none"
};

// Matrix of the doubling-map transfer operator on frequencies |m| <= N:
// row m has a single 1 in column 2m.  With a weight (alpha,beta) the matrix
// is conjugated by diag(exp(beta ln(1+|m|)^{1/alpha})).
TransferMatrix doubling_matrix(
    int N, std::optional<std::pair<double, double>> weight = std::nullopt);

struct SingularValueCheck {
  std::vector<double> closed_form;  // sorted decreasing, zero-padded
  std::vector<double> numeric;      // sorted decreasing
  double max_abs_diff = 0.0;
};

// Closed-form singular values exp(beta(ln(1+|m|)^{1/a} - ln(1+2|m|)^{1/a}))
// of the weighted doubling matrix against a dense SVD of the truncation.
SingularValueCheck doubling_singular_values(double alpha, double beta, int N);

struct NuclearityReport {
  enum class Trend { converging, diverging, boundary };
  std::vector<long long> N_list;
  std::vector<double> partial_sums;  // sum_{|n|<=N} sigma_n
  std::vector<double> increments;
  double fitted_exponent = 0.0;  // q in -log sigma_n ~ c (log n)^q
  Trend trend = Trend::boundary;
};

// Schatten-1 partial sums of the closed-form singular values; the trend is
// classified by the fitted log-exponent q = 1/alpha - 1 (q > 1 summable,
// q < 1 not), with the raw increments reported alongside.  q within 0.15 of
// 1 is flagged as boundary, where summability depends on beta.
NuclearityReport nuclearity_diagnostic(double alpha, double beta,
                                       const std::vector<long long>& N_list);

// Weighted-composition matrix of a circle covering map by spectrally
// accurate trapezoid quadrature (>= 8N points, power-of-two FFT path);
// entries drift under quadrature doubling beyond 1e-8 raises an error.
TransferMatrix expanding_transfer_matrix(const CircleMap& map, int N,
                                         Convention convention);

// Fiber Koopman matrix of the suspension at time = roof acting on the base
// frequency lattice |xi|_inf <= N: the A^tr-permutation convolved with the
// Fourier coefficients of exp(roof*g); images outside the lattice are
// dropped.  When a weight spec is supplied the matrix is conjugated by
// diag(w_{Theta,alpha}(xi, 0)).
TransferMatrix torus_koopman_matrix(const ToralSuspension& sys, int N,
                                    const WeightSpec* spec = nullptr,
                                    const ConeSystem* theta = nullptr,
                                    const AngularPartition* angular = nullptr);

struct Resonance {
  cplx lambda;
  int multiplicity = 1;
};

struct ResonanceSet {
  std::vector<Resonance> entries;  // sorted by decreasing Re, then |Im|
  std::string source;              // "matrix-spectrum" or "determinant-zeros"
  int truncation = 0;
  double strip_im_max = 0.0;

  void sort_entries();
  std::size_t total_multiplicity() const;
};

// Resonances of the suspension from the fiber Koopman truncation: for every
// eigenvalue mu with |mu| > drop_tol, lambda = (Log mu + 2 pi i k)/roof for
// |k| <= k_max, multiplicities inherited.
ResonanceSet resonances_suspension(const ToralSuspension& sys, int N,
                                   int k_max, double drop_tol = 1e-6);

// det(I - e^{-s*roof} K_N) for the fiber Koopman truncation K_N.
cplx twisted_determinant(const ToralSuspension& sys, cplx s, int N);

// Zeros of the twisted determinant inside the box [re_lo,re_hi] x
// [im_lo,im_hi], located by argument-principle winding on subdivided
// rectangles and polished by secant iteration to |ds| <= 1e-10.
std::vector<cplx> twisted_determinant_zeros(const ToralSuspension& sys, int N,
                                            double re_lo, double re_hi,
                                            double im_lo, double im_hi);

// Sparse triplet export (row, col, re, im) of the nonzero entries.
std::string to_triplet_text(const TransferMatrix& m, double drop_tol = 0.0);

}  // namespace ruelle
