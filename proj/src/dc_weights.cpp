#include "ruelle/dc_weights.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace ruelle {

CarlemanParams::CarlemanParams(double kappa_, double upsilon_)
    : kappa(kappa_), upsilon(upsilon_) {
  if (!(kappa > 0.0)) throw std::invalid_argument("CarlemanParams: kappa <= 0");
  if (!(upsilon > 1.0))
    throw std::invalid_argument("CarlemanParams: upsilon <= 1");
}

double log_carleman_weight(int m, const CarlemanParams& p) {
  if (m < 0) throw std::invalid_argument("log_carleman_weight: m < 0");
  return std::pow(double(m), p.upsilon) / p.kappa;
}

double carleman_weight(int m, const CarlemanParams& p) {
  return std::exp(log_carleman_weight(m, p));
}

bool log_convexity_check(const CarlemanParams& p, int m_max) {
  if (m_max < 1) throw std::invalid_argument("log_convexity_check: m_max < 1");
  for (int m = 1; m <= m_max; ++m) {
    const double lhs = 2.0 * log_carleman_weight(m, p);
    const double rhs =
        log_carleman_weight(m - 1, p) + log_carleman_weight(m + 1, p);
    if (lhs > rhs + 1e-12 * std::max(1.0, std::abs(rhs))) return false;
  }
  return true;
}

void SampledFunction::validate() const {
  if (dim < 1 || int(lo.size()) != dim || int(shape.size()) != dim)
    throw std::invalid_argument("SampledFunction: inconsistent dimensions");
  if (!(h > 0.0)) throw std::invalid_argument("SampledFunction: spacing <= 0");
  std::size_t n = 1;
  for (int s : shape) {
    if (s < 1) throw std::invalid_argument("SampledFunction: empty axis");
    n *= std::size_t(s);
  }
  if (values.size() != n)
    throw std::invalid_argument("SampledFunction: value count mismatch");
  for (const cplx& v : values)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw std::invalid_argument("SampledFunction: non-finite sample");
}

std::size_t SampledFunction::size() const {
  std::size_t n = 1;
  for (int s : shape) n *= std::size_t(s);
  return n;
}

std::vector<double> SampledFunction::point(const std::vector<int>& idx) const {
  std::vector<double> x(dim);
  for (int a = 0; a < dim; ++a) x[a] = lo[a] + h * idx[a];
  return x;
}

SampledFunction SampledFunction::line(double a, double b, int n,
                                      int max_deriv) {
  if (n < 2 || !(b > a)) throw std::invalid_argument("line: bad grid");
  SampledFunction f;
  f.dim = 1;
  f.lo = {a};
  f.h = (b - a) / (n - 1);
  f.shape = {n};
  f.values.assign(n, 0.0);
  f.max_deriv_order = max_deriv;
  return f;
}

namespace {

// One fourth-order centered first-derivative pass along `axis`; the two
// outermost cells on that axis become invalid and are flagged with NaN.
std::vector<cplx> diff_axis(const std::vector<cplx>& v,
                            const std::vector<int>& shape, int axis,
                            double h) {
  const int dim = int(shape.size());
  std::vector<std::size_t> stride(dim, 1);
  for (int a = dim - 2; a >= 0; --a)
    stride[a] = stride[a + 1] * std::size_t(shape[a + 1]);
  std::vector<cplx> out(v.size(), cplx(std::nan(""), 0.0));
  const std::size_t s = stride[axis];
  const int n_axis = shape[axis];
  const std::size_t total = v.size();
  for (std::size_t i = 0; i < total; ++i) {
    const int pos = int((i / s) % std::size_t(n_axis));
    if (pos < 2 || pos >= n_axis - 2) continue;
    out[i] = (-v[i + 2 * s] + 8.0 * v[i + s] - 8.0 * v[i - s] + v[i - 2 * s]) /
             (12.0 * h);
  }
  return out;
}

void next_multi_index(std::vector<int>& alpha, int cap, bool& done) {
  // Enumerates alpha with |alpha| <= cap in lexicographic order.
  const int dim = int(alpha.size());
  for (int a = dim - 1; a >= 0; --a) {
    int total = std::accumulate(alpha.begin(), alpha.end(), 0);
    if (total < cap) {
      ++alpha[a];
      for (int b = a + 1; b < dim; ++b) alpha[b] = 0;
      return;
    }
    total -= alpha[a];
    alpha[a] = 0;
  }
  done = true;
}

}  // namespace

double seminorm_estimate(const SampledFunction& f, const CarlemanParams& p,
                         int m_cap, int alpha_cap) {
  f.validate();
  if (m_cap < 0 || alpha_cap < 0)
    throw std::invalid_argument("seminorm_estimate: negative cap");
  if (alpha_cap > f.max_deriv_order)
    throw std::invalid_argument(
        "seminorm_estimate: alpha_cap exceeds derivative access");
  for (int s : f.shape)
    if (s < alpha_cap + 1)
      throw std::invalid_argument("insufficient stencil");

  // Precompute the m-dependent log factors once.
  std::vector<double> exp_penalty(m_cap + alpha_cap + 1);
  for (int t = 0; t <= m_cap + alpha_cap; ++t)
    exp_penalty[t] = log_carleman_weight(t, p);

  double best = 0.0;
  std::vector<int> alpha(f.dim, 0);
  bool done = false;
  while (!done) {
    const int aord = std::accumulate(alpha.begin(), alpha.end(), 0);
    // D^alpha by repeated axis passes.
    std::vector<cplx> d = f.values;
    for (int a = 0; a < f.dim; ++a)
      for (int k = 0; k < alpha[a]; ++k) d = diff_axis(d, f.shape, a, f.h);

    std::vector<int> idx(f.dim, 0);
    const std::size_t total = f.size();
    for (std::size_t i = 0; i < total; ++i) {
      const cplx dv = d[i];
      if (std::isfinite(dv.real())) {
        double r2 = 0.0;
        {
          std::size_t rem = i;
          for (int a = f.dim - 1; a >= 0; --a) {
            idx[a] = int(rem % std::size_t(f.shape[a]));
            rem /= std::size_t(f.shape[a]);
          }
        }
        for (int a = 0; a < f.dim; ++a) r2 += sqr(f.lo[a] + f.h * idx[a]);
        const double log1px = std::log1p(std::sqrt(r2));
        const double mag = std::abs(dv);
        if (mag > 0.0) {
          const double logmag = std::log(mag);
          for (int m = 0; m <= m_cap; ++m) {
            const double logterm =
                m * log1px + logmag - exp_penalty[m + aord];
            if (logterm > -700.0) best = std::max(best, std::exp(logterm));
          }
        }
      }
    }
    next_multi_index(alpha, alpha_cap, done);
  }
  return best;
}

bool fourier_decay_check(const SampledFunction& fhat, double seminorm,
                         const CarlemanParams& p, double R, double C) {
  fhat.validate();
  if (!(R > 0.0) || !(C > 0.0))
    throw std::invalid_argument("fourier_decay_check: R, C must be positive");
  const double e = p.decay_exponent();
  std::vector<int> idx(fhat.dim, 0);
  const std::size_t total = fhat.size();
  for (std::size_t i = 0; i < total; ++i) {
    std::size_t rem = i;
    double r2 = 0.0;
    for (int a = fhat.dim - 1; a >= 0; --a) {
      idx[a] = int(rem % std::size_t(fhat.shape[a]));
      rem /= std::size_t(fhat.shape[a]);
      r2 += sqr(fhat.lo[a] + fhat.h * idx[a]);
    }
    const double bound =
        C * seminorm * std::exp(-R * std::pow(std::log1p(std::sqrt(r2)), e));
    if (std::abs(fhat.values[i]) > bound) return false;
  }
  return true;
}

double min_decay_constant(const SampledFunction& fhat, double seminorm,
                          const CarlemanParams& p, double R) {
  double hi = 1.0;
  int guard = 0;
  while (!fourier_decay_check(fhat, seminorm, p, R, hi)) {
    hi *= 2.0;
    if (++guard > 4000)
      throw std::runtime_error("min_decay_constant: no bound found");
  }
  // The check is monotone in C, so bisect down from the passing value.
  double lo = 0.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    (fourier_decay_check(fhat, seminorm, p, R, mid) ? hi : lo) = mid;
    if (hi - lo < 1e-12 * hi) break;
  }
  return hi;
}

}  // namespace ruelle
