#include "ruelle/trig.hpp"

#include <cmath>
#include <stdexcept>

namespace ruelle {

namespace {
cplx expi(double t) { return cplx(std::cos(t), std::sin(t)); }
}  // namespace

cplx Trig1::eval(double x) const {
  cplx s = 0.0;
  for (const auto& [k, ck] : c) s += ck * expi(kTwoPi * k * x);
  return s;
}

cplx Trig1::deriv(double x) const {
  cplx s = 0.0;
  for (const auto& [k, ck] : c) s += ck * cplx(0.0, kTwoPi * k) * expi(kTwoPi * k * x);
  return s;
}

bool Trig1::is_real(double tol) const {
  for (const auto& [k, ck] : c) {
    auto it = c.find(-k);
    const cplx mirror = (it == c.end()) ? cplx(0.0) : it->second;
    if (std::abs(std::conj(ck) - mirror) > tol) return false;
  }
  return true;
}

double Trig1::max_re(int grid) const {
  double m = -1e300;
  for (int i = 0; i < grid; ++i) m = std::max(m, eval(double(i) / grid).real());
  return m;
}

int Trig1::max_freq() const {
  int m = 0;
  for (const auto& [k, ck] : c) m = std::max(m, std::abs(k));
  return m;
}

Trig1 Trig1::constant(cplx v) {
  Trig1 t;
  if (v != 0.0) t.c[0] = v;
  return t;
}

Trig1 Trig1::coskx(int k, double amp) {
  Trig1 t;
  t.c[k] += 0.5 * amp;
  t.c[-k] += 0.5 * amp;
  return t;
}

Trig1 Trig1::sinkx(int k, double amp) {
  Trig1 t;
  t.c[k] += cplx(0.0, -0.5 * amp);
  t.c[-k] += cplx(0.0, 0.5 * amp);
  return t;
}

cplx Trig2::eval(double x0, double x1) const {
  cplx s = 0.0;
  for (const auto& [k, ck] : c) s += ck * expi(kTwoPi * (k[0] * x0 + k[1] * x1));
  return s;
}

bool Trig2::is_real(double tol) const {
  for (const auto& [k, ck] : c) {
    auto it = c.find({-k[0], -k[1]});
    const cplx mirror = (it == c.end()) ? cplx(0.0) : it->second;
    if (std::abs(std::conj(ck) - mirror) > tol) return false;
  }
  return true;
}

double Trig2::max_re(int grid) const {
  double m = -1e300;
  for (int i = 0; i < grid; ++i)
    for (int j = 0; j < grid; ++j)
      m = std::max(m, eval(double(i) / grid, double(j) / grid).real());
  return m;
}

int Trig2::max_freq() const {
  int m = 0;
  for (const auto& [k, ck] : c) m = std::max({m, std::abs(k[0]), std::abs(k[1])});
  return m;
}

Trig2 Trig2::constant(cplx v) {
  Trig2 t;
  if (v != 0.0) t.c[{0, 0}] = v;
  return t;
}

Trig2 Trig2::coskx(std::array<int, 2> k, double amp) {
  Trig2 t;
  t.c[k] += 0.5 * amp;
  t.c[{-k[0], -k[1]}] += 0.5 * amp;
  return t;
}

std::map<int, cplx> exp_fourier(const Trig1& g, cplx scale, int max_out,
                                double tol) {
  auto transform = [&](int M) {
    std::vector<cplx> out(2 * max_out + 1);
    for (int k = -max_out; k <= max_out; ++k) {
      cplx s = 0.0;
      for (int j = 0; j < M; ++j) {
        const double x = double(j) / M;
        s += std::exp(scale * g.eval(x)) * expi(-kTwoPi * k * x);
      }
      out[k + max_out] = s / double(M);
    }
    return out;
  };
  int M = std::max(64, 8 * (g.max_freq() + 1) * (max_out + 1));
  auto a = transform(M);
  for (int round = 0; round < 8; ++round) {
    auto b = transform(2 * M);
    double drift = 0.0;
    for (size_t i = 0; i < a.size(); ++i) drift = std::max(drift, std::abs(a[i] - b[i]));
    if (drift < tol) {
      std::map<int, cplx> m;
      for (int k = -max_out; k <= max_out; ++k) m[k] = b[k + max_out];
      return m;
    }
    a = std::move(b);
    M *= 2;
  }
  throw std::runtime_error("exp_fourier: coefficients did not stabilize");
}

std::map<std::array<int, 2>, cplx> exp_fourier(const Trig2& g, cplx scale,
                                               int max_out, double tol) {
  auto transform = [&](int M) {
    std::vector<cplx> grid(size_t(M) * M);
    for (int i = 0; i < M; ++i)
      for (int j = 0; j < M; ++j)
        grid[size_t(i) * M + j] =
            std::exp(scale * g.eval(double(i) / M, double(j) / M));
    std::map<std::array<int, 2>, cplx> out;
    for (int k0 = -max_out; k0 <= max_out; ++k0)
      for (int k1 = -max_out; k1 <= max_out; ++k1) {
        cplx s = 0.0;
        for (int i = 0; i < M; ++i)
          for (int j = 0; j < M; ++j)
            s += grid[size_t(i) * M + j] *
                 expi(-kTwoPi * (k0 * double(i) + k1 * double(j)) / M);
        out[{k0, k1}] = s / double(M * M);
      }
    return out;
  };
  int M = std::max(16, 4 * (g.max_freq() + 1) + 2 * max_out);
  auto a = transform(M);
  for (int round = 0; round < 6; ++round) {
    auto b = transform(2 * M);
    double drift = 0.0;
    for (const auto& [k, v] : a) drift = std::max(drift, std::abs(v - b.at(k)));
    if (drift < tol) return b;
    a = std::move(b);
    M *= 2;
  }
  throw std::runtime_error("exp_fourier: coefficients did not stabilize");
}

}  // namespace ruelle
