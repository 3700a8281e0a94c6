#include "ruelle/sampling.hpp"

#include <cmath>
#include <stdexcept>

namespace ruelle {

namespace {
constexpr unsigned kPrimes[] = {2,  3,  5,  7,  11, 13, 17, 19,
                                23, 29, 31, 37, 41, 43, 47, 53};

// Acklam-style rational approximation of the standard normal quantile,
// accurate to ~1e-9; ample for direction sampling.
double norm_quantile(double p) {
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425, phigh = 1 - plow;
  double q, r;
  if (p < plow) {
    q = std::sqrt(-2 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q +
            c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
  }
  if (p > phigh) {
    q = std::sqrt(-2 * std::log(1 - p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q +
             c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
  }
  q = p - 0.5;
  r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r +
          a[5]) *
         q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1);
}
}  // namespace

double van_der_corput(std::uint64_t k, unsigned base) {
  double x = 0.0, f = 1.0 / base;
  while (k > 0) {
    x += f * (k % base);
    k /= base;
    f /= base;
  }
  return x;
}

Eigen::VectorXd halton_point(std::uint64_t i, int dim) {
  if (dim > 16) throw std::invalid_argument("halton_point: dim > 16");
  Eigen::VectorXd p(dim);
  for (int j = 0; j < dim; ++j) p[j] = van_der_corput(i + 1, kPrimes[j]);
  return p;
}

std::vector<Eigen::VectorXd> sphere_points(int n, int dim) {
  std::vector<Eigen::VectorXd> out;
  out.reserve(n);
  for (std::uint64_t i = 0; out.size() < static_cast<size_t>(n); ++i) {
    Eigen::VectorXd u = halton_point(i, dim);
    Eigen::VectorXd g(dim);
    for (int j = 0; j < dim; ++j) g[j] = norm_quantile(u[j]);
    const double r = g.norm();
    if (r < 1e-8) continue;
    out.push_back(g / r);
  }
  return out;
}

}  // namespace ruelle
