#include "ruelle/trace_check.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ruelle/quadrature.hpp"

namespace ruelle {

TestFunction::TestFunction(double center, double width, double amplitude,
                           int tail_order)
    : center_(center), width_(width), amplitude_(amplitude),
      tail_order_(tail_order) {
  if (!(width > 0.0)) throw std::invalid_argument("TestFunction: width <= 0");
  if (!(center - width >= 0.0))
    throw std::invalid_argument("TestFunction: support leaves (0, inf)");
  if (tail_order < 1) throw std::invalid_argument("TestFunction: tail_order < 1");
}

double TestFunction::deriv(int k, double t) const {
  if (k < 0) throw std::invalid_argument("TestFunction::deriv: k < 0");
  const double u = (t - center_) / width_;
  if (std::abs(u) >= 1.0) return 0.0;
  // g(u) = -1/(1-u^2); g^{(m)}(u) = -(m!/2)[(1-u)^{-(m+1)} +
  // (-1)^m (1+u)^{-(m+1)}].
  const int kmax = k;
  std::vector<double> g(kmax + 2);
  {
    double mfact = 1.0;
    double am = 1.0 / (1.0 - u), bm = 1.0 / (1.0 + u);
    double ap = am, bp = bm;
    for (int m = 0; m <= kmax + 1; ++m) {
      if (m > 0) {
        mfact *= m;
        ap *= am;
        bp *= bm;
      }
      g[m] = -0.5 * mfact * (ap + ((m % 2 == 0) ? bp : -bp));
    }
  }
  // h0 = exp(g), h_{j+1} = sum_i C(j,i) h_i g_{j+1-i}   (derivatives in u).
  std::vector<double> h(kmax + 1);
  h[0] = std::exp(g[0]);
  std::vector<double> binom(kmax + 1, 1.0);
  for (int j = 0; j < kmax; ++j) {
    // binom holds C(j, i) for i = 0..j
    double acc = 0.0;
    for (int i = 0; i <= j; ++i) acc += binom[i] * h[i] * g[j + 1 - i];
    h[j + 1] = acc;
    for (int i = j + 1; i >= 1; --i) binom[i] += binom[i - 1];
  }
  return amplitude_ * h[kmax] / std::pow(width_, double(k));
}

double TestFunction::bv_norm(int k) const {
  // h^{(k)} is smooth, so its variation is the L1 norm of h^{(k+1)}.
  const int n = 4096;
  double s = 0.0;
  const double a = support_lo(), b = support_hi();
  const double dt = (b - a) / n;
  for (int i = 0; i <= n; ++i) {
    const double w = (i == 0 || i == n) ? 0.5 : 1.0;
    s += w * std::abs(deriv(k + 1, a + i * dt));
  }
  return s * dt;
}

double TestFunction::ck_norm(int k) const {
  const int n = 4096;
  double m = 0.0;
  const double a = support_lo(), b = support_hi();
  for (int j = 0; j <= k; ++j)
    for (int i = 0; i <= n; ++i)
      m = std::max(m, std::abs(deriv(j, a + i * (b - a) / n)));
  return m;
}

double TestFunction::integral() const {
  return laplace(*this, 0.0).real();
}

cplx laplace(const TestFunction& h, cplx lambda) {
  const double a = h.support_lo(), b = h.support_hi();
  // Size the initial panels to the oscillation of e^{lambda t}.
  const int panels =
      std::max(8, int(std::ceil(std::abs(lambda.imag()) * (b - a) / 3.0)));
  return integrate_adaptive(
      [&](double t) { return std::exp(lambda * t) * h.value(t); }, a, b,
      1e-12, panels);
}

ResonanceSumResult lhs_resonance_sum(const ResonanceSet& res,
                                     const TestFunction& h, int K) {
  if (K < 0) throw std::invalid_argument("lhs_resonance_sum: K < 0");
  // Order by |Im lambda| (then re, then sign) and take the first K.
  std::vector<const Resonance*> order;
  order.reserve(res.entries.size());
  for (const auto& r : res.entries) order.push_back(&r);
  std::sort(order.begin(), order.end(), [](const Resonance* a,
                                           const Resonance* b) {
    const double ia = std::abs(a->lambda.imag()), ib = std::abs(b->lambda.imag());
    if (ia != ib) return ia < ib;
    if (a->lambda.real() != b->lambda.real())
      return a->lambda.real() > b->lambda.real();
    return a->lambda.imag() > b->lambda.imag();
  });

  ResonanceSumResult out;
  const int k = h.tail_order();
  const double bv = h.bv_norm(k);
  const double sup_t = h.support_hi();
  double min_skipped = 1e300;
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (int(i) < K) {
      out.value += double(order[i]->multiplicity) * laplace(h, order[i]->lambda);
      ++out.used;
    } else {
      min_skipped = std::min(min_skipped, std::abs(order[i]->lambda));
    }
  }
  // Integration-by-parts bound summed over the omitted entries.
  out.tail = 0.0;
  for (std::size_t i = out.used; i < order.size(); ++i) {
    const cplx l = order[i]->lambda;
    const double grow = std::exp(sup_t * std::max(l.real(), 0.0));
    out.tail += double(order[i]->multiplicity) * grow * bv /
                std::pow(std::max(std::abs(l), 1e-12), double(k + 1));
  }
  return out;
}

cplx rhs_orbit_sum(const std::vector<PeriodicOrbit>& orbits,
                   const TestFunction& h, double table_T_max) {
  if (h.support_hi() > table_T_max + 1e-12)
    throw std::invalid_argument("rhs_orbit_sum: orbit table short");
  cplx s = 0.0;
  for (const auto& po : orbits) {
    if (po.T < h.support_lo() || po.T > h.support_hi()) continue;
    s += double(po.count) * po.T_primitive * h.value(po.T) *
         std::exp(po.g_integral) / po.det_factor();
  }
  return s;
}

cplx operator_side_trace(const ToralSuspension& sys, const TestFunction& h,
                         int N, int k_max) {
  const ResonanceSet rs = resonances_suspension(sys, N, k_max);
  cplx s = 0.0;
  for (const auto& r : rs.entries)
    s += double(r.multiplicity) * laplace(h, r.lambda);
  return s;
}

CountingTailReport counting_tail(const ResonanceSet& res, double epsilon,
                                 int d,
                                 const std::vector<std::size_t>& K_list) {
  if (!(epsilon > 0.0))
    throw std::invalid_argument("counting_tail: epsilon <= 0");
  if (K_list.empty() || !std::is_sorted(K_list.begin(), K_list.end()))
    throw std::invalid_argument("counting_tail: need increasing K_list");
  // Nearest-first ordering by |lambda|.
  std::vector<const Resonance*> order;
  for (const auto& r : res.entries) order.push_back(&r);
  std::sort(order.begin(), order.end(),
            [](const Resonance* a, const Resonance* b) {
              const double ma = std::abs(a->lambda), mb = std::abs(b->lambda);
              if (ma != mb) return ma < mb;
              return a->lambda.imag() > b->lambda.imag();
            });
  CountingTailReport rep;
  rep.K_list = K_list;
  double acc = 0.0;
  std::size_t pos = 0;
  for (std::size_t K : K_list) {
    for (; pos < std::min(K, order.size()); ++pos) {
      const cplx l = order[pos]->lambda;
      acc += double(order[pos]->multiplicity) *
             std::exp(epsilon * l.real()) /
             (1.0 + std::pow(std::abs(l), double(d + 1) + epsilon));
    }
    rep.partial_sums.push_back(acc);
  }
  for (std::size_t j = 0; j + 1 < rep.partial_sums.size(); ++j)
    rep.increments.push_back(rep.partial_sums[j + 1] - rep.partial_sums[j]);
  rep.cauchy = !rep.increments.empty();
  for (std::size_t j = 0; j < rep.increments.size(); ++j) {
    if (rep.increments[j] > 1e-6 &&
        j + 1 == rep.increments.size())
      rep.cauchy = false;
    if (j + 1 < rep.increments.size() &&
        rep.increments[j + 1] > rep.increments[j] &&
        rep.increments[j + 1] > 1e-6)
      rep.cauchy = false;
  }
  return rep;
}

}  // namespace ruelle
