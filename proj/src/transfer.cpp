#include "ruelle/transfer.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

namespace ruelle {

namespace {

// In-place radix-2 FFT (forward: sign = -1), n a power of two.
void fft(std::vector<cplx>& a, int sign) {
  const std::size_t n = a.size();
  if (n & (n - 1))
    throw std::invalid_argument("fft: size not a power of two");
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = sign * kTwoPi / double(len);
    const cplx wl(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      cplx w = 1.0;
      for (std::size_t j = 0; j < len / 2; ++j) {
        const cplx u = a[i + j];
        const cplx v = a[i + j + len / 2] * w;
        a[i + j] = u + v;
        a[i + j + len / 2] = u - v;
        w *= wl;
      }
    }
  }
}

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

// All rows m in [-N,N] of the weighted-composition matrix via one FFT per
// column: column l holds the Fourier coefficients of x -> e^{g(x)} e^{2 pi i
// l f(x)} (Koopman) or y -> e^{g(y)} e^{-2 pi i m f(y)} paired with e^{2 pi
// i l y} (transfer, handled by swapping roles below).
Eigen::MatrixXcd composition_matrix(const CircleMap& map, int N,
                                    Convention convention, std::size_t Q) {
  const int dim = 2 * N + 1;
  Eigen::MatrixXcd M(dim, dim);
  std::vector<double> fx(Q);
  std::vector<cplx> egx(Q);
  for (std::size_t q = 0; q < Q; ++q) {
    const double x = double(q) / double(Q);
    fx[q] = map.lift(x);
    egx[q] = map.potential.empty() ? cplx(1.0)
                                   : std::exp(map.potential.eval(x));
  }
  std::vector<cplx> buf(Q);
  if (convention == Convention::koopman) {
    // K[m,l] = (1/Q) sum_q e^{-2 pi i m x_q} e^{g(x_q)} e^{2 pi i l f(x_q)};
    // one forward FFT in m per column l.
    for (int l = -N; l <= N; ++l) {
      for (std::size_t q = 0; q < Q; ++q)
        buf[q] = egx[q] * std::exp(cplx(0.0, kTwoPi * l * fx[q]));
      fft(buf, -1);
      for (int m = -N; m <= N; ++m) {
        const std::size_t idx = m >= 0 ? std::size_t(m) : Q + std::size_t(m);
        M(m + N, l + N) = buf[idx] / double(Q);
      }
    }
  } else {
    // T[m,l] = (1/Q) sum_q e^{+2 pi i l y_q} e^{g(y_q)} e^{-2 pi i m f(y_q)};
    // one inverse-sign FFT in l per row m.
    for (int m = -N; m <= N; ++m) {
      for (std::size_t q = 0; q < Q; ++q)
        buf[q] = egx[q] * std::exp(cplx(0.0, -kTwoPi * m * fx[q]));
      fft(buf, +1);
      for (int l = -N; l <= N; ++l) {
        const std::size_t idx = l >= 0 ? std::size_t(l) : Q + std::size_t(l);
        M(m + N, l + N) = buf[idx] / double(Q);
      }
    }
  }
  return M;
}

}  // namespace

TransferMatrix doubling_matrix(
    int N, std::optional<std::pair<double, double>> weight) {
  if (N < 2) throw std::invalid_argument("doubling_matrix: N < 2");
  const int dim = 2 * N + 1;
  TransferMatrix t;
  t.N = N;
  t.lattice_dim = 1;
  t.convention = Convention::transfer;
  t.entries = Eigen::MatrixXcd::Zero(dim, dim);
  for (int m = -N; m <= N; ++m) {
    if (std::abs(2 * m) > N) continue;
    double v = 1.0;
    if (weight) {
      const auto [alpha, beta] = *weight;
      v = isotropic_weight(alpha, beta, m) / isotropic_weight(alpha, beta, 2 * m);
    }
    t.entries(m + N, 2 * m + N) = v;
  }
  t.weight = weight ? "isotropic(alpha=" + std::to_string(weight->first) +
                          ",beta=" + std::to_string(weight->second) + ")"
                    : "none";
  return t;
}

SingularValueCheck doubling_singular_values(double alpha, double beta, int N) {
  if (!(alpha > 0.0 && alpha < 1.0) || !(beta > 0.0))
    throw std::invalid_argument("doubling_singular_values: bad parameters");
  const TransferMatrix t = doubling_matrix(N, std::make_pair(alpha, beta));
  SingularValueCheck out;
  out.closed_form.assign(std::size_t(2 * N + 1), 0.0);
  std::size_t k = 0;
  for (int m = -N; m <= N; ++m)
    if (std::abs(2 * m) <= N)
      out.closed_form[k++] =
          std::exp(beta * (std::pow(std::log1p(std::abs(double(m))), 1.0 / alpha) -
                           std::pow(std::log1p(2.0 * std::abs(double(m))),
                                    1.0 / alpha)));
  std::sort(out.closed_form.begin(), out.closed_form.end(),
            std::greater<double>());
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(t.entries);
  out.numeric.assign(svd.singularValues().data(),
                     svd.singularValues().data() + svd.singularValues().size());
  std::sort(out.numeric.begin(), out.numeric.end(), std::greater<double>());
  out.max_abs_diff = 0.0;
  for (std::size_t i = 0; i < out.numeric.size(); ++i)
    out.max_abs_diff = std::max(
        out.max_abs_diff, std::abs(out.numeric[i] - out.closed_form[i]));
  return out;
}

NuclearityReport nuclearity_diagnostic(double alpha, double beta,
                                       const std::vector<long long>& N_list) {
  if (N_list.size() < 2 || !std::is_sorted(N_list.begin(), N_list.end()))
    throw std::invalid_argument("nuclearity_diagnostic: need increasing N_list");
  auto sigma = [&](long long n) {
    return std::exp(beta * (std::pow(std::log1p(double(n)), 1.0 / alpha) -
                            std::pow(std::log1p(2.0 * double(n)), 1.0 / alpha)));
  };
  NuclearityReport rep;
  rep.N_list = N_list;
  double acc = 1.0;  // n = 0 term
  long long n = 1;
  for (long long Nstop : N_list) {
    for (; n <= Nstop; ++n) acc += 2.0 * sigma(n);
    rep.partial_sums.push_back(acc);
  }
  for (std::size_t j = 0; j + 1 < rep.partial_sums.size(); ++j)
    rep.increments.push_back(rep.partial_sums[j + 1] - rep.partial_sums[j]);

  // Fit -log sigma_n ~ c (log n)^q on a log-spaced tail sample.
  const long long n_hi = N_list.back();
  const long long n_lo = std::max<long long>(8, n_hi / 100);
  std::vector<double> xs, ys;
  for (double t = std::log(double(n_lo)); t <= std::log(double(n_hi)) + 1e-9;
       t += (std::log(double(n_hi)) - std::log(double(n_lo))) / 24.0) {
    const long long nn = std::llround(std::exp(t));
    const double neg_log = -std::log(sigma(nn));
    if (neg_log <= 0.0) continue;
    xs.push_back(std::log(std::log1p(double(nn))));
    ys.push_back(std::log(neg_log));
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  const double nfit = double(xs.size());
  rep.fitted_exponent = (nfit * sxy - sx * sy) / (nfit * sxx - sx * sx);
  if (rep.fitted_exponent > 1.15)
    rep.trend = NuclearityReport::Trend::converging;
  else if (rep.fitted_exponent < 0.85)
    rep.trend = NuclearityReport::Trend::diverging;
  else
    rep.trend = NuclearityReport::Trend::boundary;
  return rep;
}

TransferMatrix expanding_transfer_matrix(const CircleMap& map, int N,
                                         Convention convention) {
  if (N < 8) throw std::invalid_argument("expanding_transfer_matrix: N < 8");
  const int max_g = map.potential.empty() ? 0 : map.potential.max_freq();
  const int max_p = map.perturbation.empty() ? 0 : map.perturbation.max_freq();
  const std::size_t Q = next_pow2(std::size_t(
      std::max(8 * N, 16 * (N * (map.degree + max_p) + max_g + 8))));
  Eigen::MatrixXcd M = composition_matrix(map, N, convention, Q);
  Eigen::MatrixXcd M2 = composition_matrix(map, N, convention, 2 * Q);
  const double drift = (M - M2).cwiseAbs().maxCoeff();
  if (drift > 1e-8)
    throw std::runtime_error(
        "expanding_transfer_matrix: quadrature aliasing, drift " +
        std::to_string(drift));
  TransferMatrix t;
  t.N = N;
  t.lattice_dim = 1;
  t.convention = convention;
  t.entries = std::move(M2);
  t.weight = "none";
  return t;
}

TransferMatrix torus_koopman_matrix(const ToralSuspension& sys, int N,
                                    const WeightSpec* spec,
                                    const ConeSystem* theta,
                                    const AngularPartition* angular) {
  if (N < 1) throw std::invalid_argument("torus_koopman_matrix: N < 1");
  const FrequencyLattice lat(2, N);
  const std::size_t dim = lat.size();
  TransferMatrix t;
  t.N = N;
  t.lattice_dim = 2;
  t.convention = Convention::koopman;
  t.entries = Eigen::MatrixXcd::Zero(dim, dim);

  const bool has_g = !sys.potential.empty();
  std::map<std::array<int, 2>, cplx> eg;
  int g_reach = 0;
  if (has_g) {
    // exp(roof * g) truncated where coefficients fall below 1e-16.
    int max_out = sys.potential.max_freq() + 8;
    for (;;) {
      eg = exp_fourier(sys.potential, cplx(sys.roof), max_out);
      double edge = 0.0;
      for (const auto& [k, v] : eg)
        if (std::max(std::abs(k[0]), std::abs(k[1])) == max_out)
          edge = std::max(edge, std::abs(v));
      if (edge < 1e-16) break;
      max_out += 8;
      if (max_out > 256)
        throw std::runtime_error("torus_koopman_matrix: potential too rough");
    }
    g_reach = max_out;
  }

  const Eigen::Matrix2i At = sys.A.transpose();
  for (std::size_t col = 0; col < dim; ++col) {
    const Eigen::VectorXi eta = lat.point(col);
    const Eigen::Vector2i img(At(0, 0) * eta[0] + At(0, 1) * eta[1],
                              At(1, 0) * eta[0] + At(1, 1) * eta[1]);
    if (!has_g) {
      Eigen::VectorXi xi(2);
      xi << img[0], img[1];
      if (lat.inside(xi)) t.entries(lat.index(xi), col) = 1.0;
      continue;
    }
    for (const auto& [k, v] : eg) {
      if (std::abs(v) == 0.0) continue;
      Eigen::VectorXi xi(2);
      xi << img[0] + k[0], img[1] + k[1];
      if (lat.inside(xi)) t.entries(lat.index(xi), col) += v;
    }
  }
  (void)g_reach;

  if (spec) {
    if (!theta || !angular)
      throw std::invalid_argument(
          "torus_koopman_matrix: weight needs cone system and partition");
    // Weight evaluated on the fiber at flow frequency 0.
    Eigen::VectorXd w(dim);
    for (std::size_t i = 0; i < dim; ++i) {
      const Eigen::VectorXi xi = lat.point(i);
      Eigen::VectorXd x3(3);
      x3 << double(xi[0]), double(xi[1]), 0.0;
      w[i] = weight_w(*spec, *theta, *angular, x3);
    }
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t j = 0; j < dim; ++j)
        if (t.entries(i, j) != 0.0) t.entries(i, j) *= w[i] / w[j];
    t.weight = "anisotropic(alpha=" + std::to_string(spec->alpha) + ")";
  } else {
    t.weight = "none";
  }
  return t;
}

void ResonanceSet::sort_entries() {
  std::sort(entries.begin(), entries.end(), [](const Resonance& a,
                                               const Resonance& b) {
    if (a.lambda.real() != b.lambda.real())
      return a.lambda.real() > b.lambda.real();
    const double ia = std::abs(a.lambda.imag()), ib = std::abs(b.lambda.imag());
    if (ia != ib) return ia < ib;
    return a.lambda.imag() > b.lambda.imag();
  });
}

std::size_t ResonanceSet::total_multiplicity() const {
  std::size_t n = 0;
  for (const auto& e : entries) n += std::size_t(e.multiplicity);
  return n;
}

ResonanceSet resonances_suspension(const ToralSuspension& sys, int N,
                                   int k_max, double drop_tol) {
  if (k_max < 0) throw std::invalid_argument("resonances_suspension: k_max < 0");
  const TransferMatrix K = torus_koopman_matrix(sys, N);
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(K.entries, false);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("resonances_suspension: eigensolver failed");
  // Cluster nonzero eigenvalues.
  std::vector<std::pair<cplx, int>> mus;
  for (int i = 0; i < es.eigenvalues().size(); ++i) {
    const cplx mu = es.eigenvalues()[i];
    if (std::abs(mu) <= drop_tol) continue;
    bool merged = false;
    for (auto& [m, cnt] : mus)
      if (std::abs(m - mu) < 1e-8 * std::max(1.0, std::abs(m))) {
        m = (m * double(cnt) + mu) / double(cnt + 1);
        ++cnt;
        merged = true;
        break;
      }
    if (!merged) mus.push_back({mu, 1});
  }
  ResonanceSet rs;
  rs.source = "matrix-spectrum";
  rs.truncation = N;
  rs.strip_im_max = (kTwoPi * k_max + kPi) / sys.roof;
  for (const auto& [mu, cnt] : mus) {
    const cplx logmu = std::log(mu);  // principal branch
    for (int k = -k_max; k <= k_max; ++k)
      rs.entries.push_back(
          {(logmu + cplx(0.0, kTwoPi * k)) / sys.roof, cnt});
  }
  rs.sort_entries();
  return rs;
}

cplx twisted_determinant(const ToralSuspension& sys, cplx s, int N) {
  const TransferMatrix K = torus_koopman_matrix(sys, N);
  const std::size_t dim = K.entries.rows();
  Eigen::MatrixXcd M = Eigen::MatrixXcd::Identity(dim, dim) -
                       std::exp(-s * sys.roof) * K.entries;
  return Eigen::PartialPivLU<Eigen::MatrixXcd>(M).determinant();
}

namespace {

// Winding number of det along the rectangle boundary, by refining the
// sampling until consecutive phase steps stay below pi/2.
int boundary_winding(const std::function<cplx(cplx)>& f, double re_lo,
                     double re_hi, double im_lo, double im_hi) {
  std::vector<cplx> corners = {cplx(re_lo, im_lo), cplx(re_hi, im_lo),
                               cplx(re_hi, im_hi), cplx(re_lo, im_hi),
                               cplx(re_lo, im_lo)};
  double total = 0.0;
  for (int e = 0; e < 4; ++e) {
    int pts = 32;
    for (;;) {
      double darg = 0.0;
      bool ok = true;
      cplx prev = f(corners[e]);
      if (std::abs(prev) < 1e-14) return -1000;  // zero on contour
      for (int j = 1; j <= pts; ++j) {
        const double t = double(j) / pts;
        const cplx z = corners[e] + t * (corners[e + 1] - corners[e]);
        const cplx v = f(z);
        if (std::abs(v) < 1e-14) return -1000;
        const double step = std::arg(v / prev);
        if (std::abs(step) > kPi / 2) {
          ok = false;
          break;
        }
        darg += step;
        prev = v;
      }
      if (ok) {
        total += darg;
        break;
      }
      pts *= 2;
      if (pts > 1 << 16)
        throw std::runtime_error("boundary_winding: phase tracking failed");
    }
  }
  return int(std::lround(total / kTwoPi));
}

}  // namespace

std::vector<cplx> twisted_determinant_zeros(const ToralSuspension& sys, int N,
                                            double re_lo, double re_hi,
                                            double im_lo, double im_hi) {
  // det(I - e^{-s roof} K) depends on s only through e^{-s roof}; cache the
  // eigenvalues of K once and evaluate the determinant as a product.
  const TransferMatrix K = torus_koopman_matrix(sys, N);
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(K.entries, false);
  const Eigen::VectorXcd mu = es.eigenvalues();
  auto det = [&](cplx s) {
    cplx p = 1.0;
    const cplx z = std::exp(-s * sys.roof);
    for (int i = 0; i < mu.size(); ++i) p *= 1.0 - z * mu[i];
    return p;
  };

  std::vector<cplx> zeros;
  std::function<void(double, double, double, double, int)> descend =
      [&](double a, double b, double c, double d, int depth) {
        int w = boundary_winding(det, a, b, c, d);
        if (w == -1000) {
          // zero on or near the contour: nudge the box
          const double ea = 1e-4 * (b - a), ec = 1e-4 * (d - c);
          w = boundary_winding(det, a - ea, b + ea, c - ec, d + ec);
          if (w == -1000)
            throw std::runtime_error("twisted_determinant_zeros: contour hit");
        }
        if (w == 0) return;
        if ((b - a < 1e-4 && d - c < 1e-4) || depth > 48) {
          // Polish from the box center by a secant iteration.
          cplx s0(0.5 * (a + b), 0.5 * (c + d));
          cplx s1 = s0 + cplx(0.25 * (b - a) + 1e-7, 0.125 * (d - c));
          cplx f0 = det(s0), f1 = det(s1);
          for (int it = 0; it < 80; ++it) {
            if (std::abs(f1 - f0) == 0.0) break;
            const cplx s2 = s1 - f1 * (s1 - s0) / (f1 - f0);
            s0 = s1;
            f0 = f1;
            s1 = s2;
            f1 = det(s2);
            if (std::abs(s1 - s0) < 1e-12) break;
          }
          for (int i = 0; i < w; ++i) zeros.push_back(s1);
          return;
        }
        // Slightly off-center splits keep zeros away from shared edges.
        if (b - a >= d - c) {
          const double m = a + 0.501093 * (b - a);
          descend(a, m, c, d, depth + 1);
          descend(m, b, c, d, depth + 1);
        } else {
          const double m = c + 0.501093 * (d - c);
          descend(a, b, c, m, depth + 1);
          descend(a, b, m, d, depth + 1);
        }
      };
  // Slightly irrational outer margin so lattice-like zeros avoid the edges.
  descend(re_lo - 1.9371e-3, re_hi + 2.2173e-3, im_lo - 2.643e-3,
          im_hi + 1.7317e-3, 0);
  std::sort(zeros.begin(), zeros.end(), [](cplx x, cplx y) {
    if (x.real() != y.real()) return x.real() < y.real();
    return x.imag() < y.imag();
  });
  return zeros;
}

std::string to_triplet_text(const TransferMatrix& m, double drop_tol) {
  std::ostringstream os;
  os.precision(17);
  os << "# rows cols nnz convention " << m.entries.rows() << ' '
     << m.entries.cols() << ' ';
  std::size_t nnz = 0;
  for (int i = 0; i < m.entries.rows(); ++i)
    for (int j = 0; j < m.entries.cols(); ++j)
      if (std::abs(m.entries(i, j)) > drop_tol) ++nnz;
  os << nnz << ' '
     << (m.convention == Convention::koopman ? "koopman" : "transfer") << '\n';
  for (int i = 0; i < m.entries.rows(); ++i)
    for (int j = 0; j < m.entries.cols(); ++j)
      if (std::abs(m.entries(i, j)) > drop_tol)
        os << i << ' ' << j << ' ' << m.entries(i, j).real() << ' '
           << m.entries(i, j).imag() << '\n';
  return os.str();
}

}  // namespace ruelle
