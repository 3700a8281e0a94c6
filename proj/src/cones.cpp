#include "ruelle/cones.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "ruelle/sampling.hpp"

namespace ruelle {

namespace {
void check_orthonormal(const Eigen::MatrixXd& frame) {
  const int n = int(frame.rows());
  if (frame.cols() != n) throw std::invalid_argument("Cone: frame not square");
  const double defect =
      (frame.transpose() * frame - Eigen::MatrixXd::Identity(n, n))
          .cwiseAbs()
          .maxCoeff();
  if (defect > 1e-12)
    throw std::invalid_argument("Cone: frame not orthonormal to 1e-12");
}
}  // namespace

Cone::Cone(Eigen::MatrixXd frame_, int core_dim_, double aperture_)
    : frame(std::move(frame_)), core_dim(core_dim_), aperture(aperture_) {
  check_orthonormal(frame);
  if (core_dim < 1 || core_dim > dim())
    throw std::invalid_argument("Cone: core_dim out of range");
  if (aperture < 0.0) throw std::invalid_argument("Cone: negative aperture");
}

std::pair<double, double> Cone::split_norms(const Eigen::VectorXd& xi) const {
  const Eigen::VectorXd u = frame.transpose() * xi;
  return {u.head(core_dim).norm(), u.tail(dim() - core_dim).norm()};
}

Cone Cone::axis(int dim, std::vector<int> core_axes, double aperture) {
  Eigen::MatrixXd f = Eigen::MatrixXd::Zero(dim, dim);
  std::vector<bool> used(dim, false);
  int col = 0;
  for (int a : core_axes) {
    f(a, col++) = 1.0;
    used[a] = true;
  }
  for (int a = 0; a < dim; ++a)
    if (!used[a]) f(a, col++) = 1.0;
  return Cone(f, int(core_axes.size()), aperture);
}

Cone Cone::around(const Eigen::MatrixXd& core_cols, double aperture) {
  const int n = int(core_cols.rows());
  const int k = int(core_cols.cols());
  // Complete to an orthonormal basis with a QR factorization.
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(n, n);
  m.leftCols(k) = core_cols;
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(m.leftCols(k));
  Eigen::MatrixXd q = qr.householderQ();
  // Keep the core columns' orientation.
  Eigen::MatrixXd f = q;
  f.leftCols(k) = core_cols;
  // Re-orthonormalize the completion against the (already orthonormal) core.
  for (int c = k; c < n; ++c) {
    Eigen::VectorXd v = q.col(c);
    for (int b = 0; b < c; ++b) v -= f.col(b).dot(v) * f.col(b);
    f.col(c) = v / v.norm();
  }
  return Cone(f, k, aperture);
}

bool contains(const Cone& c, const Eigen::VectorXd& xi, double tol) {
  const auto [core, perp] = c.split_norms(xi);
  return perp <= c.aperture * core + tol * xi.norm();
}

double cone_distance(const Cone& c, const Eigen::VectorXd& p) {
  const auto [core, perp] = c.split_norms(p);
  const double excess = perp - c.aperture * core;
  if (excess <= 0.0) return 0.0;
  return excess / std::sqrt(1.0 + sqr(c.aperture));
}

double interior_margin(const Cone& c, const Eigen::VectorXd& xi) {
  const auto [core, perp] = c.split_norms(xi);
  return c.aperture * core - perp;
}

std::vector<Eigen::VectorXd> cone_unit_samples(const Cone& c, int samples) {
  const int D = c.dim();
  const int k = c.core_dim;
  std::vector<Eigen::VectorXd> out;
  out.reserve(samples);
  if (k == D) {
    return sphere_points(samples, D);
  }
  // Opening-ratio grid t in [0, aperture], boundary included.
  const int nt = c.aperture > 0.0 ? std::max(2, int(std::sqrt(samples / 4.0)))
                                  : 1;
  const int per_t = std::max(1, samples / nt);
  const auto cores =
      k > 1 ? sphere_points(per_t, k) : std::vector<Eigen::VectorXd>{};
  const auto perps = (D - k) > 1 ? sphere_points(per_t, D - k)
                                 : std::vector<Eigen::VectorXd>{};
  for (int it = 0; it < nt; ++it) {
    const double t =
        nt == 1 ? 0.0 : c.aperture * double(it) / double(nt - 1);
    for (int j = 0; j < per_t; ++j) {
      Eigen::VectorXd u = Eigen::VectorXd::Zero(D);
      if (k == 1)
        u[0] = (j % 2 == 0) ? 1.0 : -1.0;
      else
        u.head(k) = cores[j];
      Eigen::VectorXd w = Eigen::VectorXd::Zero(D);
      if (D - k == 1)
        w[k] = (j / 2 % 2 == 0) ? 1.0 : -1.0;
      else
        w.tail(D - k) = perps[j];
      Eigen::VectorXd v = (u + t * w) / std::sqrt(1.0 + t * t);
      out.push_back(c.frame * v);
    }
  }
  return out;
}

bool strictly_nested(const Cone& inner, const Cone& outer, int samples) {
  if (inner.dim() != outer.dim())
    throw std::invalid_argument("strictly_nested: dimension mismatch");
  if (samples < 100)
    throw std::invalid_argument("strictly_nested: need samples >= 100");
  // Exact path when the cores span the same subspace.
  if (inner.core_dim == outer.core_dim) {
    const Eigen::MatrixXd pi =
        inner.frame.leftCols(inner.core_dim) *
        inner.frame.leftCols(inner.core_dim).transpose();
    const Eigen::MatrixXd po =
        outer.frame.leftCols(outer.core_dim) *
        outer.frame.leftCols(outer.core_dim).transpose();
    if ((pi - po).cwiseAbs().maxCoeff() <= 1e-12)
      return inner.aperture < outer.aperture;
  }
  constexpr double kMargin = 1e-6;
  for (const auto& xi : cone_unit_samples(inner, samples))
    if (interior_margin(outer, xi) < kMargin) return false;
  return true;
}

double transverse_gap(const Cone& a, const Cone& b, int samples) {
  if (a.dim() != b.dim())
    throw std::invalid_argument("transverse_gap: dimension mismatch");
  if (samples < 1000)
    throw std::invalid_argument("transverse_gap: need samples >= 1000");
  double best = 1e300;
  for (const auto& xi : cone_unit_samples(a, samples))
    best = std::min(best, cone_distance(b, xi));
  for (const auto& xi : cone_unit_samples(b, samples))
    best = std::min(best, cone_distance(a, xi));
  return best < 1e-12 ? 0.0 : best;
}

const Cone& ConeSystem::sector_cone(int sector) const {
  if (sector == kSectorF) return cf;
  if (sector == 0) return c0;
  if (sector >= 1 && sector <= r() - 1) return chain[sector - 1];
  throw std::invalid_argument("sector_cone: bad sector");
}

SystemReport is_cone_system(const ConeSystem& theta, int samples) {
  if (samples < 1000)
    throw std::invalid_argument("is_cone_system: need samples >= 1000");
  SystemReport rep;
  const int D = theta.dim();
  const int r = theta.r();
  if (r < 2) {
    rep.violations.push_back({3, "chain shorter than r=2"});
    rep.ok = false;
    return rep;
  }

  // (iii) dimensions.
  if (theta.du + theta.ds + 1 != D)
    rep.violations.push_back({3, "du + ds + 1 != dim"});
  if (theta.c0.core_dim != theta.ds)
    rep.violations.push_back({3, "C_0 not ds-dimensional"});
  for (int i = 0; i < r; ++i)
    if (theta.chain[i].core_dim != theta.du)
      rep.violations.push_back({3, "C_" + std::to_string(i + 1) +
                                       " not du-dimensional"});

  // (ii) flow cone pinched around the flow direction.
  if (theta.cf.core_dim != 1)
    rep.violations.push_back({2, "C_f not one-dimensional"});
  else {
    const Eigen::VectorXd vf = theta.cf.frame.col(0);
    const Eigen::VectorXd e = theta.flow_dir.normalized();
    const double core_dot = std::abs(vf.dot(e));
    const double perp_norm =
        (theta.cf.frame.rightCols(D - 1).transpose() * e).norm();
    const double c_low = (core_dot - theta.cf.aperture * perp_norm) /
                         std::sqrt(1.0 + sqr(theta.cf.aperture));
    if (!(c_low > 0.0))
      rep.violations.push_back(
          {2, "no c>0 with |<xi,e>| >= c|xi| on C_f"});
  }

  // (i) interiors of C_0, C_1, C_f cover the sphere.
  constexpr double kMargin = 1e-6;
  for (const auto& xi : sphere_points(samples, D)) {
    const double m = std::max({interior_margin(theta.c0, xi),
                               interior_margin(theta.chain[0], xi),
                               interior_margin(theta.cf, xi)});
    if (m < kMargin) {
      std::ostringstream os;
      os << "uncovered direction (" << xi.transpose() << ")";
      rep.violations.push_back({1, os.str()});
      break;
    }
  }

  // (iv) strict nesting along the chain.
  for (int i = 0; i + 1 < r; ++i)
    if (!strictly_nested(theta.chain[i + 1], theta.chain[i],
                         std::max(100, samples / 4)))
      rep.violations.push_back({4, "C_" + std::to_string(i + 2) +
                                       " not compactly inside C_" +
                                       std::to_string(i + 1)});

  // (v) C_0 and C_f meet C_2 only at 0.
  if (r >= 2) {
    if (transverse_gap(theta.c0, theta.chain[1], samples) <= 0.0)
      rep.violations.push_back({5, "C_0 meets C_2"});
    if (transverse_gap(theta.cf, theta.chain[1], samples) <= 0.0)
      rep.violations.push_back({5, "C_f meets C_2"});
  }

  rep.ok = rep.violations.empty();
  return rep;
}

ConeHyperbolicityReport cone_hyperbolic(const std::vector<Eigen::MatrixXd>& dt,
                                        const ConeSystem& theta,
                                        const ConeSystem& theta_p,
                                        int samples) {
  if (dt.empty()) throw std::invalid_argument("cone_hyperbolic: empty dt");
  const int D = theta.dim();
  for (const auto& m : dt)
    if (m.rows() != D || m.cols() != D || theta_p.dim() != D)
      throw std::invalid_argument("cone_hyperbolic: dimension mismatch");
  const int r = theta.r();
  ConeHyperbolicityReport rep;
  bool cond12_ok = true;
  double lambda_expand = 1e300;
  double lambda_contract = 1e300;
  constexpr double kTol = 1e-9;

  for (size_t mi = 0; mi < dt.size(); ++mi) {
    const Eigen::MatrixXd& M = dt[mi];
    // (i) chain images two steps deeper.
    for (int i = 1; i <= r; ++i) {
      const Cone& src = theta.chain[i - 1];
      const Cone& dst = theta_p.chain[std::min(i + 2, r) - 1];
      for (const auto& xi : cone_unit_samples(src, samples)) {
        if (!contains(dst, M * xi, kTol)) {
          cond12_ok = false;
          rep.witnesses.push_back({1, int(mi), xi});
          break;
        }
      }
    }
    // (ii) flow cone image transverse to C'_0.
    for (const auto& xi : cone_unit_samples(theta.cf, samples)) {
      const Eigen::VectorXd eta = M * xi;
      if (cone_distance(theta_p.c0, eta) <= kTol * eta.norm()) {
        cond12_ok = false;
        rep.witnesses.push_back({2, int(mi), xi});
        break;
      }
    }
    // (iii) expansion on C_{r-1}.
    for (const auto& xi : cone_unit_samples(theta.chain[r - 2], samples))
      lambda_expand = std::min(lambda_expand, (M * xi).norm());
    // (iv) contraction of vectors sent into C'_0; probe preimages of C'_0
    // plus plain sphere directions.
    Eigen::FullPivLU<Eigen::MatrixXd> lu(M);
    std::vector<Eigen::VectorXd> probes = sphere_points(samples, D);
    if (lu.isInvertible())
      for (const auto& eta : cone_unit_samples(theta_p.c0, samples))
        probes.push_back(lu.solve(eta).normalized());
    for (const auto& xi : probes) {
      const Eigen::VectorXd eta = M * xi;
      if (contains(theta_p.c0, eta, kTol) && eta.norm() > 0.0)
        lambda_contract = std::min(lambda_contract, 1.0 / eta.norm());
    }
  }

  rep.Lambda = std::min(lambda_expand, lambda_contract);
  rep.holds = cond12_ok && rep.Lambda > 1.0;
  if (!(rep.Lambda > 1.0) && rep.holds == false && cond12_ok) {
    rep.witnesses.push_back(
        {lambda_expand <= lambda_contract ? 3 : 4, 0,
         Eigen::VectorXd::Zero(D)});
  }
  if (rep.holds) rep.witnesses.clear();
  return rep;
}

Eigen::MatrixXd suspension_dt_transpose(const Eigen::Matrix2d& A) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(3, 3);
  m.topLeftCorner<2, 2>() = A.transpose();
  return m;
}

namespace {
// Orthonormal (unstable, stable) directions of a symmetric hyperbolic A.
std::pair<Eigen::Vector2d, Eigen::Vector2d> eigen_dirs(
    const Eigen::Matrix2d& A) {
  if ((A - A.transpose()).cwiseAbs().maxCoeff() > 1e-12)
    throw std::invalid_argument(
        "cone builders: need a symmetric automorphism (orthogonal "
        "eigenframe)");
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(A);
  // Eigenvalues sorted increasingly; unstable last.
  Eigen::Vector2d vu = es.eigenvectors().col(1);
  Eigen::Vector2d vs = es.eigenvectors().col(0);
  if (std::abs(es.eigenvalues()(1)) <= 1.0)
    throw std::invalid_argument("cone builders: automorphism not hyperbolic");
  return {vu, vs};
}

Cone embedded_cone(const Eigen::Vector2d& core2, double aperture) {
  Eigen::MatrixXd core = Eigen::MatrixXd::Zero(3, 1);
  core(0, 0) = core2(0);
  core(1, 0) = core2(1);
  return Cone::around(core, aperture);
}

ConeSystem assemble(const Eigen::Vector2d& vu, const Eigen::Vector2d& vs,
                    double ap_stable, const std::vector<double>& ap_chain,
                    double ap_flow) {
  ConeSystem s;
  s.c0 = embedded_cone(vs, ap_stable);
  for (double a : ap_chain) s.chain.push_back(embedded_cone(vu, a));
  Eigen::MatrixXd fcore = Eigen::MatrixXd::Zero(3, 1);
  fcore(2, 0) = 1.0;
  s.cf = Cone::around(fcore, ap_flow);
  s.flow_dir = Eigen::Vector3d(0, 0, 1);
  s.du = 1;
  s.ds = 1;
  return s;
}
}  // namespace

ConeSystemPair builder_for_toral_suspension(const Eigen::Matrix2d& A) {
  const auto [vu, vs] = eigen_dirs(A);
  ConeSystemPair pair;
  // Apertures tuned for expansion >= (3+sqrt(5))/2; they satisfy jointly:
  // both systems pass the full cone-system definition, their angular
  // partitions of unity exist (the shrunken sector supports still cover the
  // sphere, min normalizer 0.03), and diag(A^tr,1) is cone-hyperbolic from
  // theta into theta_p with Lambda >= 2.05.
  pair.theta = assemble(vu, vs, 3.408, {0.698, 0.276, 0.197, 0.140}, 3.084);
  pair.theta_p = assemble(vu, vs, 0.806, {3.478, 0.381, 0.272, 0.158}, 2.488);
  return pair;
}

ConeSystemPair eigen_frame_systems(const Eigen::Matrix2d& A, double aperture,
                                   int r) {
  const auto [vu, vs] = eigen_dirs(A);
  ConeSystemPair pair;
  pair.theta = assemble(vu, vs, aperture,
                        std::vector<double>(size_t(r), aperture), aperture);
  pair.theta_p = pair.theta;
  return pair;
}

std::string serialize(const ConeSystem& theta) {
  std::ostringstream os;
  os.precision(17);
  const int D = theta.dim();
  os << "dim " << D << "\nr " << theta.r() << "\ndu " << theta.du << "\nds "
     << theta.ds << "\nflow_dir";
  for (int i = 0; i < D; ++i) os << ' ' << theta.flow_dir(i);
  os << '\n';
  auto dump = [&](const std::string& name, const Cone& c) {
    os << name << " core_dim " << c.core_dim << " aperture " << c.aperture
       << '\n';
    for (int row = 0; row < D; ++row) {
      os << name << " frame_row";
      for (int col = 0; col < D; ++col) os << ' ' << c.frame(row, col);
      os << '\n';
    }
  };
  dump("c0", theta.c0);
  for (int i = 0; i < theta.r(); ++i)
    dump("c" + std::to_string(i + 1), theta.chain[i]);
  dump("cf", theta.cf);
  return os.str();
}

ConeSystem parse_cone_system(const std::string& text) {
  std::istringstream is(text);
  std::string tok;
  int D = 0, r = 0;
  ConeSystem s;
  auto expect = [&](const std::string& want) {
    if (!(is >> tok) || tok != want)
      throw std::runtime_error("parse_cone_system: expected '" + want +
                               "', got '" + tok + "'");
  };
  expect("dim");
  is >> D;
  expect("r");
  is >> r;
  expect("du");
  is >> s.du;
  expect("ds");
  is >> s.ds;
  expect("flow_dir");
  s.flow_dir.resize(D);
  for (int i = 0; i < D; ++i) is >> s.flow_dir(i);
  auto load = [&](const std::string& name) {
    expect(name);
    expect("core_dim");
    int k;
    is >> k;
    expect("aperture");
    double ap;
    is >> ap;
    Eigen::MatrixXd f(D, D);
    for (int row = 0; row < D; ++row) {
      expect(name);
      expect("frame_row");
      for (int col = 0; col < D; ++col) is >> f(row, col);
    }
    if (!is) throw std::runtime_error("parse_cone_system: truncated input");
    return Cone(f, k, ap);
  };
  s.c0 = load("c0");
  for (int i = 0; i < r; ++i) s.chain.push_back(load("c" + std::to_string(i + 1)));
  s.cf = load("cf");
  return s;
}

}  // namespace ruelle
