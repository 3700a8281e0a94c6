#include "ruelle/models.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

namespace ruelle {

double PeriodicOrbit::det_factor() const {
  const int n = int(poincare.rows());
  const Eigen::MatrixXd m = Eigen::MatrixXd::Identity(n, n) - poincare;
  return std::abs(m.determinant());
}

CircleMap::CircleMap(int degree_, Trig1 perturbation_, Trig1 potential_)
    : degree(degree_),
      perturbation(std::move(perturbation_)),
      potential(std::move(potential_)) {
  if (degree < 2) throw std::invalid_argument("CircleMap: degree < 2");
  if (!perturbation.empty() && !perturbation.is_real())
    throw std::invalid_argument("CircleMap: perturbation must be real");
  if (min_derivative() <= 1.0)
    throw std::invalid_argument("CircleMap: map not expanding (min f' <= 1)");
}

double CircleMap::lift(double x) const {
  double v = degree * x;
  if (!perturbation.empty()) v += perturbation.eval(x).real();
  return v;
}

double CircleMap::lift_deriv(double x) const {
  double v = degree;
  if (!perturbation.empty()) v += perturbation.deriv(x).real();
  return v;
}

double CircleMap::min_derivative(int grid) const {
  double m = 1e300;
  for (int i = 0; i < grid; ++i)
    m = std::min(m, lift_deriv(double(i) / grid));
  return m;
}

ToralSuspension::ToralSuspension(Eigen::Matrix2i A_, double roof_,
                                 Trig2 potential_)
    : A(std::move(A_)), roof(roof_), potential(std::move(potential_)) {
  const long long det =
      (long long)A(0, 0) * A(1, 1) - (long long)A(0, 1) * A(1, 0);
  if (std::llabs(det) != 1)
    throw std::invalid_argument("ToralSuspension: |det A| != 1");
  if (std::llabs((long long)A(0, 0) + A(1, 1)) <= 2)
    throw std::invalid_argument("ToralSuspension: |trace A| <= 2");
  if (!(roof > 0.0)) throw std::invalid_argument("ToralSuspension: roof <= 0");
}

Matrix2ll ToralSuspension::power(int n) const {
  if (n < 0) throw std::invalid_argument("power: n < 0");
  Matrix2ll p = Matrix2ll::Identity();
  Matrix2ll base = A.cast<long long>();
  while (n > 0) {
    if (n & 1) p = (p * base).eval();
    base = (base * base).eval();
    n >>= 1;
  }
  return p;
}

long long ToralSuspension::fixed_point_count(int n) const {
  const Matrix2ll an = power(n);
  return std::llabs(an.trace() - 2);
}

double ToralSuspension::abs_det_i_minus(int n) const {
  // det(I - A^n) = 1 - tr A^n + det A^n and det A^n = (det A)^n = +-1.
  const Matrix2ll an = power(n);
  const long long det_an = an(0, 0) * an(1, 1) - an(0, 1) * an(1, 0);
  return std::abs(double(1 - an.trace() + det_an));
}

namespace {

// f^j(x) on the circle.
double iterate_mod1(const CircleMap& map, double x, int j) {
  for (int i = 0; i < j; ++i) {
    x = map.lift(x);
    x -= std::floor(x);
  }
  return x;
}

// Derivative of f^n along the orbit starting at x.
double orbit_derivative(const CircleMap& map, double x, int n) {
  double dp = 1.0;
  for (int i = 0; i < n; ++i) {
    dp *= map.lift_deriv(x);
    x = map.lift(x);
    x -= std::floor(x);
  }
  return dp;
}

// Solves F^n(x) - x = m on [0,1) by bisection; the function is strictly
// increasing with slope >= min(f')^n - 1 > 0.
double solve_branch(const CircleMap& map, int n, long long m) {
  auto G = [&](double x) {
    double y = x;
    for (int i = 0; i < n; ++i) y = map.lift(y);
    return y - x;
  };
  double lo = 0.0, hi = 1.0;
  const double g_lo = G(lo);
  if (double(m) < g_lo - 1e-12 || double(m) > G(hi) + 1e-12)
    throw std::runtime_error("enumerate_orbits_circle: branch word " +
                             std::to_string(m) + " out of range");
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (G(mid) < double(m))
      lo = mid;
    else
      hi = mid;
    if (hi - lo < 1e-16) break;
  }
  const double x = 0.5 * (lo + hi);
  if (std::abs(G(x) - double(m)) > 1e-8)
    throw std::runtime_error(
        "enumerate_orbits_circle: bisection failed to converge on branch " +
        std::to_string(m));
  return x;
}

long long ipow(long long b, int e) {
  long long r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

}  // namespace

std::vector<PeriodicOrbit> enumerate_orbits_circle(const CircleMap& map,
                                                   int n_max) {
  if (n_max < 1)
    throw std::invalid_argument("enumerate_orbits_circle: n_max < 1");
  std::vector<PeriodicOrbit> orbits;
  const long long k = map.degree;

  for (int n = 1; n <= n_max; ++n) {
    const long long total = ipow(k, n) - 1;

    if (map.unperturbed()) {
      // Exact path: periodic points are m/(k^n - 1) and f acts on the
      // residues m by multiplication with k mod (k^n - 1).
      std::vector<bool> used(size_t(total), false);
      for (long long s = 0; s < total; ++s) {
        if (used[size_t(s)]) continue;
        std::vector<long long> cyc;
        long long m = s;
        do {
          used[size_t(m)] = true;
          cyc.push_back(m);
          m = (m * k) % total;
        } while (m != s);
        if (int(cyc.size()) < n) continue;  // primitive period divides n
        PeriodicOrbit po;
        po.T = n;
        po.T_primitive = n;
        po.poincare = Eigen::MatrixXd::Constant(1, 1, double(ipow(k, n)));
        if (!map.potential.empty()) {
          std::vector<double> xs;
          xs.reserve(cyc.size());
          for (long long q : cyc) xs.push_back(double(q) / double(total));
          po.g_integral = orbit_weight(xs, map.potential);
        }
        po.count = 1;
        orbits.push_back(std::move(po));
      }
      continue;
    }

    // Perturbed path: one root per branch residue m = F^n(x) - x.
    std::vector<double> pts;
    pts.reserve(size_t(total));
    double base = 0.0;  // G(0) = F^n(0)
    for (int i = 0; i < n; ++i) base = map.lift(base);
    const long long m_lo = (long long)std::ceil(base - 1e-12);
    for (long long m = m_lo; m < m_lo + total; ++m)
      pts.push_back(solve_branch(map, n, m));
    std::sort(pts.begin(), pts.end());

    // Group into orbits of exact period n (shorter periods already appeared
    // at their primitive n).
    const double match_tol = 1e-9;
    std::vector<bool> used(pts.size(), false);
    auto locate = [&](double x) -> std::ptrdiff_t {
      auto it = std::lower_bound(pts.begin(), pts.end(), x - match_tol);
      for (auto j = it; j != pts.end() && *j <= x + match_tol; ++j)
        if (std::abs(*j - x) <= match_tol) return j - pts.begin();
      if (x > 1.0 - match_tol && !pts.empty() &&
          std::abs(pts.front() + 1.0 - x) <= match_tol)
        return 0;
      return -1;
    };

    for (size_t s = 0; s < pts.size(); ++s) {
      if (used[s]) continue;
      std::vector<double> orbit_pts;
      double x = pts[s];
      int period = 0;
      for (int j = 0; j < n; ++j) {
        const std::ptrdiff_t id = locate(x);
        if (id < 0)
          throw std::runtime_error(
              "enumerate_orbits_circle: orbit point drifted off the root set");
        if (j > 0 && id == std::ptrdiff_t(s)) break;
        used[size_t(id)] = true;
        orbit_pts.push_back(pts[size_t(id)]);
        x = map.lift(x);
        x -= std::floor(x);
        period = j + 1;
      }
      if (period < n) continue;

      PeriodicOrbit po;
      po.T = n;
      po.T_primitive = n;
      po.poincare = Eigen::MatrixXd::Constant(
          1, 1, orbit_derivative(map, orbit_pts.front(), n));
      po.g_integral = map.potential.empty()
                          ? cplx(0.0)
                          : orbit_weight(orbit_pts, map.potential);
      po.count = 1;
      orbits.push_back(std::move(po));
    }
  }
  return orbits;
}

std::vector<Eigen::Vector2d> lattice_fixed_points(const ToralSuspension& sys,
                                                  int n) {
  // x in [0,1)^2 with (A^n - I) x integral: x = (A^n - I)^{-1} k, k in Z^2.
  const Matrix2ll an = sys.power(n);
  Matrix2ll m = an;
  m(0, 0) -= 1;
  m(1, 1) -= 1;
  const long long det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  if (det == 0)
    throw std::runtime_error("lattice_fixed_points: A^n - I singular");
  // Inverse of m times det (integer adjugate).
  const long long adj[2][2] = {{m(1, 1), -m(0, 1)}, {-m(1, 0), m(0, 0)}};
  std::vector<Eigen::Vector2d> pts;
  pts.reserve(std::size_t(std::llabs(det)));
  // x = m^{-1} k in [0,1)^2 for integer k, i.e. k ranges over the image
  // parallelogram m([0,1)^2).  Scan k0 and solve the two strip inequalities
  // 0 <= adj_row . k / det < 1 for the admissible k1 interval.
  const long long k0_lo =
      std::min({0LL, m(0, 0), m(0, 1), m(0, 0) + m(0, 1)}) - 1;
  const long long k0_hi =
      std::max({0LL, m(0, 0), m(0, 1), m(0, 0) + m(0, 1)}) + 1;
  const double dd = double(det);
  for (long long k0 = k0_lo; k0 <= k0_hi; ++k0) {
    // Conditions: 0 <= (a k0 + b k1)/det < 1 with (a,b) the adjugate rows.
    double lo = -1e300, hi = 1e300;
    bool empty = false;
    for (int row = 0; row < 2 && !empty; ++row) {
      const double a = double(adj[row][0]) * k0;
      const double b = double(adj[row][1]);
      // 0 <= (a + b k1)/det < 1
      if (b == 0.0) {
        const double v = a / dd;
        if (v < 0.0 || v >= 1.0) empty = true;
        continue;
      }
      double l = -a / b, h = (dd - a) / b;
      if ((b > 0) != (dd > 0)) std::swap(l, h);
      lo = std::max(lo, l);
      hi = std::min(hi, h);
    }
    if (empty || lo > hi + 1.0) continue;
    for (long long k1 = (long long)std::ceil(lo - 1e-9);
         k1 <= (long long)std::floor(hi + 1e-9); ++k1) {
      const double x0 = double(adj[0][0] * k0 + adj[0][1] * k1) / dd;
      const double x1 = double(adj[1][0] * k0 + adj[1][1] * k1) / dd;
      if (x0 >= -1e-12 && x0 < 1.0 - 1e-12 && x1 >= -1e-12 &&
          x1 < 1.0 - 1e-12)
        pts.emplace_back(x0 < 0 ? 0.0 : x0, x1 < 0 ? 0.0 : x1);
    }
  }
  if ((long long)pts.size() != std::llabs(det))
    throw std::runtime_error("lattice_fixed_points: count mismatch");
  return pts;
}

namespace {

// Number of points of primitive period exactly m under A, via Moebius
// inversion of #Fix(A^m); returned as count of primitive m-orbits.
std::map<int, long long> primitive_orbit_counts(const ToralSuspension& sys,
                                                int n) {
  std::map<int, long long> orbits;
  for (int m = 1; m <= n; ++m) {
    if (n % m != 0) continue;
    // mu-inversion: points of exact period m
    long long exact = 0;
    for (int d = 1; d <= m; ++d) {
      if (m % d != 0) continue;
      // Moebius mu(m/d)
      int q = m / d, mu = 1;
      for (int p = 2; p * p <= q; ++p) {
        if (q % p == 0) {
          q /= p;
          if (q % p == 0) {
            mu = 0;
            break;
          }
          mu = -mu;
        }
      }
      if (mu != 0 && q > 1) mu = -mu;
      if (mu != 0) exact += mu * sys.fixed_point_count(d);
    }
    if (exact % m != 0)
      throw std::runtime_error("primitive_orbit_counts: necklace mismatch");
    orbits[m] = exact / m;
  }
  return orbits;
}

}  // namespace

std::vector<PeriodicOrbit> enumerate_orbits_suspension(
    const ToralSuspension& sys, double T_max) {
  if (T_max < sys.roof)
    throw std::invalid_argument("enumerate_orbits_suspension: T_max < roof");
  const int n_max = int(std::floor(T_max / sys.roof + 1e-12));
  const bool constant_g =
      sys.potential.empty() ||
      (sys.potential.c.size() == 1 && sys.potential.c.count({0, 0}) == 1);
  const cplx g0 = sys.potential.empty() ? cplx(0.0) : sys.potential.eval(0, 0);

  std::vector<PeriodicOrbit> orbits;
  for (int n = 1; n <= n_max; ++n) {
    if (constant_g) {
      // Aggregate by primitive period; the weight only depends on T.
      for (const auto& [m, cnt] : primitive_orbit_counts(sys, n)) {
        if (cnt == 0) continue;
        PeriodicOrbit po;
        po.T = n * sys.roof;
        po.T_primitive = m * sys.roof;
        po.poincare = sys.power(n).cast<double>();
        po.g_integral = g0 * po.T;
        po.count = cnt;
        orbits.push_back(std::move(po));
      }
    } else {
      if (n > 16)
        throw std::invalid_argument(
            "enumerate_orbits_suspension: non-constant potential needs "
            "pointwise enumeration, n capped at 16");
      auto pts = lattice_fixed_points(sys, n);
      std::vector<bool> used(pts.size(), false);
      const Eigen::Matrix2d Ad = sys.A.cast<double>();
      auto locate = [&](const Eigen::Vector2d& x) {
        for (size_t j = 0; j < pts.size(); ++j) {
          Eigen::Vector2d dlt = pts[j] - x;
          dlt -= dlt.array().round().matrix();
          if (dlt.norm() < 1e-9) return std::ptrdiff_t(j);
        }
        return std::ptrdiff_t(-1);
      };
      for (size_t s = 0; s < pts.size(); ++s) {
        if (used[s]) continue;
        std::vector<Eigen::Vector2d> cyc;
        Eigen::Vector2d x = pts[s];
        int period = 0;
        for (int j = 0; j < n; ++j) {
          const auto id = locate(x);
          if (id < 0)
            throw std::runtime_error(
                "enumerate_orbits_suspension: orbit left the fixed set");
          if (j > 0 && id == std::ptrdiff_t(s)) break;
          used[size_t(id)] = true;
          cyc.push_back(pts[size_t(id)]);
          Eigen::Vector2d y = Ad * x;
          y -= y.array().floor().matrix();
          x = y;
          period = j + 1;
        }
        if (period < n && n % period != 0)
          throw std::runtime_error("enumerate_orbits_suspension: bad period");
        PeriodicOrbit po;
        po.T = n * sys.roof;
        po.T_primitive = period * sys.roof;
        po.poincare = sys.power(n).cast<double>();
        po.g_integral =
            orbit_weight(cyc, sys.potential, sys.roof) * double(n / period);
        po.count = 1;
        orbits.push_back(std::move(po));
      }
    }
  }
  return orbits;
}

cplx orbit_weight(const std::vector<double>& orbit_points, const Trig1& g) {
  cplx s = 0.0;
  for (double x : orbit_points) s += g.eval(x);
  return s;
}

cplx orbit_weight(const std::vector<Eigen::Vector2d>& orbit_points,
                  const Trig2& g, double roof) {
  cplx s = 0.0;
  for (const auto& x : orbit_points) s += g.eval(x[0], x[1]);
  return s * roof;
}

double orbit_identity_check(const ToralSuspension& sys, int n) {
  if (n < 1) throw std::invalid_argument("orbit_identity_check: n < 1");
  double sum = 0.0;
  for (const auto& [m, cnt] : primitive_orbit_counts(sys, n))
    sum += double(cnt) * double(m) / sys.abs_det_i_minus(n);
  return sum;
}

}  // namespace ruelle
