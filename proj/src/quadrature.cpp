#include "ruelle/quadrature.hpp"

#include <algorithm>
#include <cstdlib>

namespace ruelle {
namespace detail {

namespace {
GaussRule make_rule(int n) {
  // Golub-Welsch via Newton on Legendre recurrences; plenty for n <= 64.
  GaussRule r;
  r.x.resize(n);
  r.w.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      double dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    double dp = n * (x * p1 - p0) / (x * x - 1.0);
    r.x[i] = x;
    r.w[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return r;
}
}  // namespace

const GaussRule& gauss10() {
  static const GaussRule r = make_rule(10);
  return r;
}

const GaussRule& gauss21() {
  static const GaussRule r = make_rule(21);
  return r;
}

}  // namespace detail

namespace {

cplx apply_rule(const detail::GaussRule& r,
                const std::function<cplx(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  cplx s = 0.0;
  for (size_t i = 0; i < r.x.size(); ++i) s += r.w[i] * f(c + h * r.x[i]);
  return h * s;
}

cplx panel(const std::function<cplx(double)>& f, double a, double b,
           double tol, int depth, int max_depth) {
  const cplx lo = apply_rule(detail::gauss10(), f, a, b);
  const cplx hi = apply_rule(detail::gauss21(), f, a, b);
  if (std::abs(hi - lo) <= tol || depth >= max_depth) return hi;
  const double m = 0.5 * (a + b);
  return panel(f, a, m, 0.5 * tol, depth + 1, max_depth) +
         panel(f, m, b, 0.5 * tol, depth + 1, max_depth);
}

}  // namespace

cplx integrate_adaptive(const std::function<cplx(double)>& f, double a,
                        double b, double abs_tol, int initial_panels,
                        int max_depth) {
  if (!(b > a)) return 0.0;
  initial_panels = std::max(1, initial_panels);
  cplx s = 0.0;
  const double h = (b - a) / initial_panels;
  for (int i = 0; i < initial_panels; ++i) {
    s += panel(f, a + i * h, a + (i + 1) * h, abs_tol / initial_panels, 0,
               max_depth);
  }
  return s;
}

cplx integrate_gauss21(const std::function<cplx(double)>& f, double a,
                       double b) {
  return apply_rule(detail::gauss21(), f, a, b);
}

cplx ein(cplx w) {
  if (std::abs(w) < 12.0) {
    // Ein(w) = sum_{k>=1} (-1)^{k+1} w^k / (k k!), entire.
    cplx term = w, sum = w;
    for (int k = 2; k < 80; ++k) {
      term *= -w / double(k);
      const cplx add = term / double(k);
      sum += add;
      if (std::abs(add) < 1e-18 * (1.0 + std::abs(sum))) break;
    }
    return sum;
  }
  // Integrand (1-e^{-uw})/u * w at u in [0,1] is removable at 0; evaluate the
  // small-|uw| region by its series.
  auto f = [&](double u) -> cplx {
    const cplx s = u * w;
    if (std::abs(s) < 1e-2) {
      cplx acc = w, term = w;
      for (int k = 2; k <= 8; ++k) {
        term *= -s / double(k);
        acc += term;
      }
      return acc;
    }
    return (1.0 - std::exp(-s)) / u;
  };
  return integrate_adaptive(f, 0.0, 1.0, 1e-14, 16);
}

}  // namespace ruelle
