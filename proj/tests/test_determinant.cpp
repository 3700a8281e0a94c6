#include <doctest.h>

#include <random>

#include "ruelle/determinant.hpp"
#include "ruelle/quadrature.hpp"

using namespace ruelle;

namespace {
ToralSuspension cat_suspension(double roof = 1.0, Trig2 g = {}) {
  Eigen::Matrix2i A;
  A << 2, 1, 1, 1;
  return ToralSuspension(A, roof, std::move(g));
}

ResonanceSet lattice_resonances(int k_max, cplx shift = 0.0, double roof = 1.0) {
  ResonanceSet rs;
  rs.source = "matrix-spectrum";
  for (int k = -k_max; k <= k_max; ++k)
    rs.entries.push_back({shift + cplx(0.0, kTwoPi * k / roof), 1});
  rs.sort_entries();
  return rs;
}
}  // namespace

TEST_CASE("orbit sum reproduces 1 - e^{-s} for the cat suspension") {
  const auto sys = cat_suspension();
  const auto orbits = enumerate_orbits_suspension(sys, 30.0);
  const double absc = convergence_abscissa(sys);
  CHECK(absc == 0.0);

  const auto r1 = dg_orbit_sum(orbits, cplx(1.0, 0.0), 30.0, absc);
  CHECK(std::abs(r1.value - (1.0 - std::exp(-1.0))) < 1e-12);
  CHECK(r1.value.real() == doctest::Approx(0.632121).epsilon(1e-6));
  CHECK(r1.tail_bound < 1e-12);

  const auto r2 = dg_orbit_sum(orbits, cplx(std::log(2.0), 0.0), 30.0, absc);
  CHECK(std::abs(r2.value - cplx(0.5)) < 1e-12);

  CHECK_THROWS(dg_orbit_sum(orbits, cplx(-0.2, 0.0), 30.0, absc));

  const auto empty = dg_orbit_sum({}, cplx(2.0, 1.0), 30.0, 0.0);
  CHECK(empty.value == cplx(1.0));
}

TEST_CASE("orbit sum log-derivative consistency") {
  const auto sys = cat_suspension();
  const auto orbits = enumerate_orbits_suspension(sys, 40.0);
  const cplx s(2.0, 0.7);
  // direct sum of T# e^{int g} e^{-sT}/|det(I-P)|
  cplx direct = 0.0;
  for (const auto& po : orbits)
    direct += double(po.count) * po.T_primitive * std::exp(po.g_integral) *
              std::exp(-s * po.T) / po.det_factor();
  // centered difference of -log d_g
  const double h = 1e-5;
  const auto pl = dg_orbit_sum(orbits, s + h, 40.0, 0.0);
  const auto mi = dg_orbit_sum(orbits, s - h, 40.0, 0.0);
  const cplx fd = -(std::log(pl.value) - std::log(mi.value)) / (2.0 * h);
  CHECK(std::abs(fd - direct) < 1e-8);
}

TEST_CASE("discrete orbit sum: doubling map gives 1 - z") {
  const CircleMap map(2);
  const auto orbits = enumerate_orbits_circle(map, 20);
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-0.63, 0.63);
  for (int it = 0; it < 10; ++it) {
    const cplx z(u(rng), u(rng));
    const auto r = dg_orbit_sum_z(orbits, z, 20, 1.0);
    CHECK(std::abs(r.value - (1.0 - z)) < std::max(r.tail_bound, 1e-12));
  }
  const auto edge = dg_orbit_sum_z(orbits, cplx(0.9, 0.0), 20, 1.0);
  CHECK(std::abs(edge.value - cplx(0.1)) <= edge.tail_bound + 1e-12);
  CHECK(edge.tail_bound < 1e-2);
}

TEST_CASE("q polynomial") {
  // d+1 = 1, lambda = t0 = 1: Q = -(2 + X)
  const auto q = q_polynomial(1.0, 1.0, 0);
  REQUIRE(q.size() == 2);
  CHECK(std::abs(q[0] - cplx(-2.0)) < 1e-15);
  CHECK(std::abs(q[1] - cplx(-1.0)) < 1e-15);
  CHECK_THROWS(q_polynomial(0.0, 1.0, 2));

  // coefficients vanish as lambda -> infinity
  for (const auto& c : q_polynomial(cplx(0.0, 1e6), 0.5, 3))
    CHECK(std::abs(c) < 1e-5);

  // derivative identity at random points, by finite differences
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (const cplx lambda : {cplx(1.0), cplx(2.0, 3.0)}) {
    for (double t0 : {0.5, 1.0}) {
      const int d = 2;
      const auto qc = q_polynomial(lambda, t0, d);
      auto W = [&](cplx z) {
        cplx p = 0.0;
        for (auto it = qc.rbegin(); it != qc.rend(); ++it) p = p * z + *it;
        return p * std::exp(-(z - lambda) * t0);
      };
      for (int it = 0; it < 20; ++it) {
        const cplx z(u(rng), u(rng));
        const double h = 1e-5;
        const cplx fd = (W(z + h) - W(z - h)) / (2.0 * h);
        cplx rhs = 0.0;
        for (int n = 0; n <= d + 1; ++n)
          rhs += std::pow(z, n) / std::pow(lambda, n + 1);
        rhs *= std::exp(-(z - lambda) * t0);
        CHECK(std::abs(fd - rhs) < 1e-9 * std::max(1.0, std::abs(rhs)));
      }
    }
  }
}

TEST_CASE("hadamard factor: normalization, zero, log-derivative") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (const cplx lambda : {cplx(1.0), cplx(2.0, 3.0)}) {
    for (double t0 : {0.5, 1.0}) {
      const int d = 2;
      CHECK(std::abs(hadamard_factor(lambda, t0, d, 0.0) - 1.0) < 1e-14);

      // simple zero at lambda
      CHECK(std::abs(hadamard_factor(lambda, t0, d, lambda)) < 1e-12);
      double prev_ratio = -1.0;
      for (double h : {1e-3, 1e-4, 1e-5, 1e-6}) {
        const double ratio =
            std::abs(hadamard_factor(lambda, t0, d, lambda + h)) / h;
        CHECK(ratio > 1e-4);
        CHECK(ratio < 1e4);
        if (prev_ratio > 0.0)
          CHECK(std::abs(ratio - prev_ratio) < 0.2 * prev_ratio + 1e-6);
        prev_ratio = ratio;
      }

      // (G'/G)(0) = 0 by fourth-order central differences
      const double h = 0.05;
      const cplx d1 = (-hadamard_factor(lambda, t0, d, 2 * h) +
                       8.0 * hadamard_factor(lambda, t0, d, h) -
                       8.0 * hadamard_factor(lambda, t0, d, -h) +
                       hadamard_factor(lambda, t0, d, -2 * h)) /
                      (12.0 * h);
      CHECK(std::abs(d1) < 1e-9);

      // log-derivative matches the series at 50 random points
      for (int it = 0; it < 50; ++it) {
        const cplx z(u(rng), u(rng));
        if (std::abs(z - lambda) < 0.2) continue;
        const double hh = 1e-5;
        const cplx fd = (std::log(hadamard_factor(lambda, t0, d, z + hh)) -
                         std::log(hadamard_factor(lambda, t0, d, z - hh))) /
                        (2.0 * hh);
        const cplx series = hadamard_log_deriv(lambda, t0, d, z);
        CHECK(std::abs(fd - series) < 1e-8 * std::max(1.0, std::abs(series)));
      }
    }
  }
  // lambda = 0 branch: normalized along the positive axis, G_0(1) = 1
  CHECK(std::abs(hadamard_factor(0.0, 0.5, 2, 1.0) - 1.0) < 1e-13);
  CHECK(std::abs(hadamard_factor(0.0, 0.5, 2, 0.0)) < 1e-13);
  const cplx z0(0.7, 0.3);
  const double hh = 1e-5;
  const cplx fd = (std::log(hadamard_factor(0.0, 0.5, 2, z0 + hh)) -
                   std::log(hadamard_factor(0.0, 0.5, 2, z0 - hh))) /
                  (2.0 * hh);
  CHECK(std::abs(fd - std::exp(-0.5 * z0) / z0) < 1e-8);
}

TEST_CASE("factorization: manufactured single-resonance data") {
  const double t0 = 0.5;
  const int d = 2;
  ResonanceSet rs;
  rs.entries.push_back({cplx(1.5, 0.5), 1});
  const cplx true_mu = std::exp(cplx(0.3, -0.2));
  const std::vector<cplx> true_P = {cplx(0.1), cplx(-0.4, 0.2), cplx(0.05),
                                    cplx(0.0), cplx(0.01, 0.02)};
  DeterminantGrid grid;
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) {
      const cplx z(1.0 + 0.4 * i, -1.0 + 0.4 * j);
      cplx P = 0.0;
      for (auto it = true_P.rbegin(); it != true_P.rend(); ++it)
        P = P * z + *it;
      grid.points.push_back(z);
      grid.values.push_back(
          true_mu * std::exp(P * std::exp(-t0 * z)) *
          hadamard_factor(rs.entries[0].lambda, t0, d, z));
    }
  const auto fit = factorization_residual(grid, rs, t0, d);
  CHECK(fit.max_residual < 1e-8);
  for (std::size_t k = 0; k < true_P.size(); ++k)
    CHECK(std::abs(fit.P[k] - true_P[k]) < 1e-8);
  CHECK(std::abs(std::exp(fit.log_mu) - true_mu) < 1e-8);
}

TEST_CASE("factorization: empty resonance set, constant determinant") {
  DeterminantGrid grid;
  for (int i = 0; i < 12; ++i) {
    grid.points.push_back(cplx(1.0 + 0.2 * i, 0.3));
    grid.values.push_back(cplx(2.0, 1.0));
  }
  ResonanceSet rs;
  const auto fit = factorization_residual(grid, rs, 0.5, 2);
  CHECK(fit.max_residual < 1e-10);
  for (const auto& c : fit.P) CHECK(std::abs(c) < 1e-8);
}

TEST_CASE("resolvent/orbit identity for the cat suspension") {
  const auto sys = cat_suspension();
  const auto orbits = enumerate_orbits_suspension(sys, 40.0);
  const auto rs = lattice_resonances(500);
  const auto chk =
      resolvent_orbit_identity(rs, orbits, cplx(3.0, 0.0), 0.5, 2, 40.0);
  CHECK(chk.gap < 1e-6);
  CHECK(std::abs(chk.lhs) > 1e-4);  // nontrivial values

  // toy set {0}: lhs = 1/z^{d+3} exactly
  ResonanceSet zero_only;
  zero_only.entries.push_back({cplx(0.0), 1});
  const auto toy =
      resolvent_orbit_identity(zero_only, orbits, cplx(2.0, 1.0), 0.5, 2, 40.0);
  CHECK(std::abs(toy.lhs - 1.0 / std::pow(cplx(2.0, 1.0), 5)) < 1e-15);

  // doubling both truncations shrinks the gap
  const auto half = resolvent_orbit_identity(lattice_resonances(250),
                                             enumerate_orbits_suspension(sys, 20.0),
                                             cplx(3.0, 0.0), 0.5, 2, 20.0);
  CHECK(chk.gap <= half.gap + 1e-15);
}

TEST_CASE("order estimate") {
  std::vector<double> radii, m_exp, m_const, m_det;
  for (double r : {10.0, 16.0, 25.0, 40.0, 63.0, 100.0, 160.0, 250.0}) {
    radii.push_back(r);
    double mx_e = 0.0, mx_d = 0.0;
    for (int i = 0; i < 720; ++i) {
      const cplx z = std::polar(r, kTwoPi * i / 720.0);
      mx_e = std::max(mx_e, std::abs(std::exp(z)));
      mx_d = std::max(mx_d, std::abs(1.0 - std::exp(-z)));
    }
    m_exp.push_back(mx_e);
    m_const.push_back(3.7);
    m_det.push_back(mx_d);
  }
  CHECK(order_estimate(radii, m_exp) == doctest::Approx(1.0).epsilon(0.05));
  CHECK(order_estimate(radii, m_const) == doctest::Approx(0.0).epsilon(0.05));
  CHECK(order_estimate(radii, m_det) == doctest::Approx(1.0).epsilon(0.05));
  CHECK_THROWS(order_estimate({1.0, 2.0, 3.0}, {1.0, 2.0, 3.0}));
}
