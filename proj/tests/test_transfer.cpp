#include <doctest.h>

#include <random>

#include "ruelle/transfer.hpp"

using namespace ruelle;

namespace {
ToralSuspension cat_suspension(double roof = 1.0, Trig2 g = {}) {
  Eigen::Matrix2i A;
  A << 2, 1, 1, 1;
  return ToralSuspension(A, roof, std::move(g));
}
}  // namespace

TEST_CASE("doubling matrix: structure") {
  const auto t = doubling_matrix(16);
  const int N = 16;
  // row 0 (m = 0): single unit entry on the diagonal
  for (int col = -N; col <= N; ++col)
    CHECK(t.entries(N, col + N) == (col == 0 ? cplx(1.0) : cplx(0.0)));
  // odd columns vanish
  for (int col = -N; col <= N; col += 2)  // col odd: shift by one
    if ((col + 1) <= N)
      for (int row = -N; row <= N; ++row)
        CHECK(t.entries(row + N, col + 1 + N) == cplx(0.0));
  // det(I - z M) = 1 - z for several N and random z
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-0.9, 0.9);
  for (int n : {16, 64, 256}) {
    const auto m = doubling_matrix(n);
    for (int it = 0; it < 20; ++it) {
      const cplx z(u(rng), u(rng));
      const Eigen::MatrixXcd a =
          Eigen::MatrixXcd::Identity(2 * n + 1, 2 * n + 1) - z * m.entries;
      const cplx det = Eigen::PartialPivLU<Eigen::MatrixXcd>(a).determinant();
      CHECK(std::abs(det - (1.0 - z)) < 1e-12);
    }
  }
}

TEST_CASE("doubling singular values match the closed form") {
  const auto sv = doubling_singular_values(0.4, 1.0, 128);
  CHECK(sv.max_abs_diff < 1e-10);
  // n = 0 gives sigma = 1; n = 1 at alpha = 1/2, beta = 1 is exp(ln2^2-ln3^2)
  const auto sv2 = doubling_singular_values(0.5, 1.0, 64);
  CHECK(sv2.max_abs_diff < 1e-10);
  CHECK(sv2.closed_form[0] == doctest::Approx(1.0));
  const double expect = std::exp(sqr(std::log(2.0)) - sqr(std::log(3.0)));
  CHECK(expect == doctest::Approx(0.48365).epsilon(1e-4));
  bool found = false;
  for (double s : sv2.closed_form)
    if (std::abs(s - expect) < 1e-12) found = true;
  CHECK(found);
}

TEST_CASE("weight conjugation preserves the spectrum") {
  const auto plain = doubling_matrix(24);
  const auto weighted = doubling_matrix(24, std::make_pair(0.4, 1.0));
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> e1(plain.entries, false);
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> e2(weighted.entries, false);
  std::vector<double> m1, m2;
  for (int i = 0; i < e1.eigenvalues().size(); ++i) {
    m1.push_back(std::abs(e1.eigenvalues()[i]));
    m2.push_back(std::abs(e2.eigenvalues()[i]));
  }
  std::sort(m1.begin(), m1.end());
  std::sort(m2.begin(), m2.end());
  for (std::size_t i = 0; i < m1.size(); ++i)
    CHECK(std::abs(m1[i] - m2[i]) < 1e-9);
}

TEST_CASE("nuclearity diagnostic") {
  const std::vector<long long> Ns = {10, 100, 1000, 10000, 100000};
  const auto conv = nuclearity_diagnostic(0.4, 1.0, Ns);
  CHECK(conv.trend == NuclearityReport::Trend::converging);
  const auto div = nuclearity_diagnostic(0.6, 1.0, Ns);
  CHECK(div.trend == NuclearityReport::Trend::diverging);
  // classification invariant under beta scaling at alpha < 1/2
  CHECK(nuclearity_diagnostic(0.4, 10.0, Ns).trend ==
        NuclearityReport::Trend::converging);
  CHECK(nuclearity_diagnostic(0.6, 5.0, Ns).trend ==
        NuclearityReport::Trend::diverging);
  // boundary flag at alpha = 1/2
  CHECK(nuclearity_diagnostic(0.5, 1.0, Ns).trend ==
        NuclearityReport::Trend::boundary);
}

TEST_CASE("expanding transfer matrix: doubling reproduces the exact matrix") {
  const CircleMap map(2);
  const auto t = expanding_transfer_matrix(map, 16, Convention::transfer);
  const auto exact = doubling_matrix(16);
  CHECK((t.entries - exact.entries).cwiseAbs().maxCoeff() < 1e-12);

  // spectrum of the truncation: {1} plus a nilpotent block
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(t.entries, false);
  int ones = 0;
  for (int i = 0; i < es.eigenvalues().size(); ++i) {
    const double m = std::abs(es.eigenvalues()[i]);
    if (std::abs(m - 1.0) < 1e-8)
      ++ones;
    else
      CHECK(m < 1e-6);
  }
  CHECK(ones == 1);
}

TEST_CASE("convention duality: transfer = conj transpose of koopman") {
  Trig1 g = Trig1::coskx(1, 0.2);
  g.c[1] += cplx(0.0, 0.05);  // genuinely complex potential
  const CircleMap map(2, Trig1::coskx(1, 0.03), g);
  const auto t = expanding_transfer_matrix(map, 12, Convention::transfer);
  // Koopman with conjugated potential
  CircleMap conj_map = map;
  for (auto& [k, c] : conj_map.potential.c) c = std::conj(c);
  const auto k = expanding_transfer_matrix(conj_map, 12, Convention::koopman);
  CHECK((t.entries - k.entries.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("perturbed doubling: leading eigenvalue stays near one") {
  double prev_gap = 1e300;
  for (double eps : {0.05, 0.025, 0.0125}) {
    const CircleMap map(2, Trig1::coskx(1, eps));
    const auto t = expanding_transfer_matrix(map, 24, Convention::transfer);
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(t.entries, false);
    double lead = 0.0;
    for (int i = 0; i < es.eigenvalues().size(); ++i)
      lead = std::max(lead, std::abs(es.eigenvalues()[i]));
    const double gap = std::abs(lead - 1.0);
    CHECK(gap < 10.0 * eps);
    CHECK(gap <= prev_gap + 1e-12);
    prev_gap = gap;
  }
}

TEST_CASE("truncation stability of the leading spectrum") {
  const CircleMap map(2, Trig1::coskx(1, 0.05));
  auto leading = [&](int N) {
    const auto t = expanding_transfer_matrix(map, N, Convention::transfer);
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(t.entries, false);
    std::vector<double> mags;
    for (int i = 0; i < es.eigenvalues().size(); ++i)
      mags.push_back(std::abs(es.eigenvalues()[i]));
    std::sort(mags.begin(), mags.end(), std::greater<double>());
    mags.resize(5);
    return mags;
  };
  const auto a = leading(24), b = leading(48);
  for (int i = 0; i < 5; ++i) CHECK(std::abs(a[i] - b[i]) < 1e-8);
}

TEST_CASE("torus koopman: permutation structure and spectrum") {
  const auto sys = cat_suspension();
  const auto K = torus_koopman_matrix(sys, 6);
  // exactly one diagonal entry, at xi = 0
  const FrequencyLattice lat(2, 6);
  int diag = 0;
  for (std::size_t i = 0; i < lat.size(); ++i)
    if (K.entries(i, i) != 0.0) ++diag;
  CHECK(diag == 1);
  Eigen::VectorXi zero2 = Eigen::VectorXi::Zero(2);
  CHECK(K.entries(lat.index(zero2), lat.index(zero2)) == cplx(1.0));

  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(K.entries, false);
  int ones = 0;
  for (int i = 0; i < es.eigenvalues().size(); ++i) {
    const double m = std::abs(es.eigenvalues()[i]);
    if (m > 0.5) {
      ++ones;
      CHECK(std::abs(es.eigenvalues()[i] - cplx(1.0)) < 1e-10);
    } else {
      CHECK(m < 1e-10);
    }
  }
  CHECK(ones == 1);
}

TEST_CASE("resonances of the cat suspension") {
  const auto sys = cat_suspension();
  const auto rs = resonances_suspension(sys, 4, 3);
  REQUIRE(rs.entries.size() == 7);
  for (const auto& r : rs.entries) {
    CHECK(std::abs(r.lambda.real()) < 1e-9);
    CHECK(r.multiplicity == 1);
  }
  CHECK(rs.entries.front().lambda.imag() == doctest::Approx(0.0));
  // roof 2 halves the spacing
  const auto rs2 = resonances_suspension(cat_suspension(2.0), 4, 2);
  bool found_half = false;
  for (const auto& r : rs2.entries)
    if (std::abs(r.lambda - cplx(0.0, kPi)) < 1e-9) found_half = true;
  CHECK(found_half);
  // constant potential shifts everything by kappa0
  const cplx kappa0(0.3, 0.1);
  const auto rs3 =
      resonances_suspension(cat_suspension(1.0, Trig2::constant(kappa0)), 4, 2);
  for (const auto& r : rs3.entries)
    CHECK(std::abs(r.lambda.real() - kappa0.real()) < 1e-9);
}

TEST_CASE("twisted determinant: closed form and zeros") {
  const auto sys = cat_suspension();
  for (int N : {2, 4, 8}) {
    for (const cplx s : {cplx(1.0, 0.5), cplx(std::log(2.0), 0.0),
                         cplx(0.3, -2.0)}) {
      CHECK(std::abs(twisted_determinant(sys, s, N) -
                     (1.0 - std::exp(-s))) < 1e-10);
    }
  }
  CHECK(std::abs(twisted_determinant(sys, cplx(std::log(2.0), 0.0), 4) -
                 cplx(0.5)) < 1e-12);

  const auto zeros = twisted_determinant_zeros(sys, 4, -1.0, 1.0, -7.0, 7.0);
  REQUIRE(zeros.size() == 3);
  CHECK(std::abs(zeros[0] - cplx(0.0, -kTwoPi)) < 1e-8);
  CHECK(std::abs(zeros[1] - cplx(0.0, 0.0)) < 1e-8);
  CHECK(std::abs(zeros[2] - cplx(0.0, kTwoPi)) < 1e-8);
}

TEST_CASE("triplet export") {
  const auto t = doubling_matrix(4);
  const std::string text = to_triplet_text(t);
  CHECK(text.find("transfer") != std::string::npos);
  CHECK(text.find("\n4 4 1 0\n") != std::string::npos);  // m = 0 diagonal one
}
