#include "ruelle/experiments.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>

#include "ruelle/determinant.hpp"
#include "ruelle/io.hpp"
#include "ruelle/models.hpp"
#include "ruelle/separation.hpp"
#include "ruelle/trace_check.hpp"
#include "ruelle/transfer.hpp"

namespace ruelle {

namespace fs = std::filesystem;
using nlohmann::json;

void svg_line_plot(const std::string& path, const std::string& title,
                   const std::vector<double>& x,
                   const std::vector<std::vector<double>>& series,
                   const std::vector<std::string>& labels) {
  if (series.empty() || x.empty()) return;
  const int W = 720, H = 480, M = 56;
  double xmin = x.front(), xmax = x.front();
  for (double v : x) {
    xmin = std::min(xmin, v);
    xmax = std::max(xmax, v);
  }
  double ymin = 1e300, ymax = -1e300;
  for (const auto& s : series)
    for (double v : s) {
      ymin = std::min(ymin, v);
      ymax = std::max(ymax, v);
    }
  if (xmax == xmin) xmax = xmin + 1;
  if (ymax == ymin) ymax = ymin + 1;
  auto px = [&](double v) { return M + (W - 2 * M) * (v - xmin) / (xmax - xmin); };
  auto py = [&](double v) { return H - M - (H - 2 * M) * (v - ymin) / (ymax - ymin); };
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};

  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("svg_line_plot: cannot open " + path);
  os << "<svg xmlns='http://www.w3.org/2000/svg' width='" << W << "' height='"
     << H << "'>\n<!-- data:";
  for (std::size_t i = 0; i < x.size(); ++i) {
    os << ' ' << fmt_g17(x[i]);
    for (const auto& s : series) os << ',' << fmt_g17(s[i]);
  }
  os << " -->\n<rect width='100%' height='100%' fill='white'/>\n"
     << "<text x='" << W / 2 << "' y='24' text-anchor='middle' "
     << "font-family='monospace' font-size='14'>" << title << "</text>\n"
     << "<line x1='" << M << "' y1='" << H - M << "' x2='" << W - M
     << "' y2='" << H - M << "' stroke='black'/>\n"
     << "<line x1='" << M << "' y1='" << M << "' x2='" << M << "' y2='"
     << H - M << "' stroke='black'/>\n";
  for (std::size_t s = 0; s < series.size(); ++s) {
    os << "<polyline fill='none' stroke='" << colors[s % 4]
       << "' stroke-width='1.5' points='";
    for (std::size_t i = 0; i < x.size(); ++i)
      os << px(x[i]) << ',' << py(series[s][i]) << ' ';
    os << "'/>\n";
    if (s < labels.size())
      os << "<text x='" << W - M - 8 << "' y='" << M + 16 * (s + 1)
         << "' text-anchor='end' font-family='monospace' font-size='12' fill='"
         << colors[s % 4] << "'>" << labels[s] << "</text>\n";
  }
  os << "</svg>\n";
}

namespace {

double need_num(const json& j, const std::string& key) {
  if (!j.contains(key) || !j[key].is_number())
    throw ConfigError("config: missing numeric field '" + key + "'");
  return j[key].get<double>();
}

int need_int(const json& j, const std::string& key) {
  if (!j.contains(key) || !j[key].is_number_integer())
    throw ConfigError("config: missing integer field '" + key + "'");
  return j[key].get<int>();
}

double opt_num(const json& j, const std::string& key, double dflt) {
  return j.contains(key) ? need_num(j, key) : dflt;
}

int opt_int(const json& j, const std::string& key, int dflt) {
  return j.contains(key) ? need_int(j, key) : dflt;
}

Trig1 parse_trig1(const json& arr) {
  Trig1 t;
  for (const auto& term : arr) {
    const int k = need_int(term, "k");
    t.c[k] += cplx(opt_num(term, "re", 0.0), opt_num(term, "im", 0.0));
  }
  return t;
}

Trig2 parse_trig2(const json& arr) {
  Trig2 t;
  for (const auto& term : arr) {
    if (!term.contains("k") || !term["k"].is_array() || term["k"].size() != 2)
      throw ConfigError("config: torus potential term needs k = [k0,k1]");
    const std::array<int, 2> k = {term["k"][0].get<int>(),
                                  term["k"][1].get<int>()};
    t.c[k] += cplx(opt_num(term, "re", 0.0), opt_num(term, "im", 0.0));
  }
  return t;
}

CircleMap parse_circle(const json& sys) {
  const int degree = need_int(sys, "degree");
  Trig1 pert, pot;
  if (sys.contains("perturbation")) pert = parse_trig1(sys["perturbation"]);
  if (sys.contains("potential")) pot = parse_trig1(sys["potential"]);
  return CircleMap(degree, pert, pot);
}

ToralSuspension parse_suspension(const json& sys) {
  if (!sys.contains("A") || !sys["A"].is_array())
    throw ConfigError("config: suspension needs matrix A");
  Eigen::Matrix2i A;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) A(i, j) = sys["A"][i][j].get<int>();
  Trig2 pot;
  if (sys.contains("potential")) pot = parse_trig2(sys["potential"]);
  return ToralSuspension(A, opt_num(sys, "roof", 1.0), pot);
}

std::string system_type(const json& cfg) {
  if (!cfg.contains("system") || !cfg["system"].contains("type"))
    throw ConfigError("config: missing system.type");
  return cfg["system"]["type"].get<std::string>();
}

struct GridSpec {
  double re_lo, re_hi, im_lo, im_hi;
  int n_re, n_im;
};

GridSpec parse_grid(const json& g) {
  GridSpec gs;
  gs.re_lo = need_num(g, "re_lo");
  gs.re_hi = need_num(g, "re_hi");
  gs.im_lo = need_num(g, "im_lo");
  gs.im_hi = need_num(g, "im_hi");
  gs.n_re = need_int(g, "n_re");
  gs.n_im = need_int(g, "n_im");
  if (gs.n_re < 1 || gs.n_im < 1) throw ConfigError("config: empty grid");
  return gs;
}

cplx grid_point(const GridSpec& g, int i, int j) {
  const double re =
      g.n_re == 1 ? g.re_lo
                  : g.re_lo + (g.re_hi - g.re_lo) * double(i) / (g.n_re - 1);
  const double im =
      g.n_im == 1 ? g.im_lo
                  : g.im_lo + (g.im_hi - g.im_lo) * double(j) / (g.n_im - 1);
  return {re, im};
}

void run_singular_values(const json& cfg, const fs::path& out, bool plots) {
  const double alpha = need_num(cfg, "alpha"), beta = need_num(cfg, "beta");
  const int N = need_int(cfg, "N");
  const auto sv = doubling_singular_values(alpha, beta, N);
  CsvWriter csv({"rank", "closed_form", "svd_value", "abs_diff"});
  std::vector<double> xs, c1, c2;
  for (std::size_t i = 0; i < sv.numeric.size(); ++i) {
    csv.row({std::to_string(i), fmt_g17(sv.closed_form[i]),
             fmt_g17(sv.numeric[i]),
             fmt_g17(std::abs(sv.closed_form[i] - sv.numeric[i]))});
    xs.push_back(double(i));
    c1.push_back(sv.closed_form[i]);
    c2.push_back(sv.numeric[i]);
  }
  csv.save((out / "singular_values.csv").string());
  if (plots)
    svg_line_plot((out / "singular_values.svg").string(),
                  "weighted doubling: singular values", xs, {c1, c2},
                  {"closed form", "svd"});
}

void run_orbits(const json& cfg, const fs::path& out, bool plots) {
  std::vector<PeriodicOrbit> orbits;
  if (system_type(cfg) == "circle") {
    orbits = enumerate_orbits_circle(parse_circle(cfg["system"]),
                                     need_int(cfg, "n_max"));
  } else if (system_type(cfg) == "suspension") {
    orbits = enumerate_orbits_suspension(parse_suspension(cfg["system"]),
                                         need_num(cfg, "T_max"));
  } else {
    throw ConfigError("config: unknown system.type");
  }
  CsvWriter csv({"T", "T_primitive", "abs_det_i_minus_p", "re_int_g",
                 "im_int_g", "count"});
  for (const auto& po : orbits)
    csv.row({fmt_g17(po.T), fmt_g17(po.T_primitive), fmt_g17(po.det_factor()),
             fmt_g17(po.g_integral.real()), fmt_g17(po.g_integral.imag()),
             std::to_string(po.count)});
  csv.save((out / "orbits.csv").string());
  if (plots) {
    std::map<double, double> per_T;
    for (const auto& po : orbits) per_T[po.T] += double(po.count);
    std::vector<double> xs, ys;
    for (const auto& [T, n] : per_T) {
      xs.push_back(T);
      ys.push_back(std::log10(n));
    }
    svg_line_plot((out / "orbits.svg").string(), "log10 orbit count per T",
                  xs, {ys}, {"log10 count"});
  }
}

void run_determinant(const json& cfg, const fs::path& out, bool plots) {
  const GridSpec gs = parse_grid(cfg.contains("grid") ? cfg["grid"] : json());
  CsvWriter csv({"re_s", "im_s", "re_d", "im_d", "tail"});
  std::vector<double> xs, ys;
  if (system_type(cfg) == "suspension") {
    const ToralSuspension sys = parse_suspension(cfg["system"]);
    const double T_max = need_num(cfg, "T_max");
    const auto orbits = enumerate_orbits_suspension(sys, T_max);
    const double absc = convergence_abscissa(sys);
    for (int i = 0; i < gs.n_re; ++i)
      for (int j = 0; j < gs.n_im; ++j) {
        const cplx s = grid_point(gs, i, j);
        const auto r = dg_orbit_sum(orbits, s, T_max, absc);
        csv.row({fmt_g17(s.real()), fmt_g17(s.imag()), fmt_g17(r.value.real()),
                 fmt_g17(r.value.imag()), fmt_g17(r.tail_bound)});
        if (j == 0) {
          xs.push_back(s.real());
          ys.push_back(std::abs(r.value));
        }
      }
  } else if (system_type(cfg) == "circle") {
    const CircleMap map = parse_circle(cfg["system"]);
    const int n_max = need_int(cfg, "n_max");
    const auto orbits = enumerate_orbits_circle(map, n_max);
    const double radius = std::exp(-convergence_abscissa(map));
    for (int i = 0; i < gs.n_re; ++i)
      for (int j = 0; j < gs.n_im; ++j) {
        const cplx z = grid_point(gs, i, j);
        const auto r = dg_orbit_sum_z(orbits, z, n_max, radius);
        csv.row({fmt_g17(z.real()), fmt_g17(z.imag()), fmt_g17(r.value.real()),
                 fmt_g17(r.value.imag()), fmt_g17(r.tail_bound)});
        if (j == 0) {
          xs.push_back(z.real());
          ys.push_back(std::abs(r.value));
        }
      }
  } else {
    throw ConfigError("config: unknown system.type");
  }
  csv.save((out / "determinant.csv").string());
  if (plots && xs.size() > 1)
    svg_line_plot((out / "determinant.svg").string(),
                  "|d_g| along the first grid row", xs, {ys}, {"|d|"});
}

void run_resonances(const json& cfg, const fs::path& out, bool plots) {
  if (system_type(cfg) != "suspension")
    throw ConfigError("config: resonances needs a suspension system");
  const ToralSuspension sys = parse_suspension(cfg["system"]);
  const int N = need_int(cfg, "N");
  const int k_max = need_int(cfg, "k_max");
  const auto rs = resonances_suspension(sys, N, k_max);
  CsvWriter csv({"re_lambda", "im_lambda", "multiplicity", "N"});
  std::vector<double> xs, ys;
  for (const auto& r : rs.entries) {
    csv.row({fmt_g17(r.lambda.real()), fmt_g17(r.lambda.imag()),
             std::to_string(r.multiplicity), std::to_string(N)});
    xs.push_back(double(xs.size()));
    ys.push_back(r.lambda.imag());
  }
  csv.save((out / "resonances.csv").string());
  if (plots)
    svg_line_plot((out / "resonances.svg").string(), "resonance Im parts",
                  xs, {ys}, {"Im lambda"});
}

void run_trace_check(const json& cfg, const fs::path& out, bool plots) {
  if (system_type(cfg) != "suspension")
    throw ConfigError("config: trace-check needs a suspension system");
  const ToralSuspension sys = parse_suspension(cfg["system"]);
  const json& bump = cfg.contains("bump") ? cfg["bump"] : json();
  const TestFunction h(need_num(bump, "center"), need_num(bump, "width"),
                       opt_num(bump, "amplitude", 1.0));
  const int K_final = need_int(cfg, "K");
  const int N = opt_int(cfg, "N", 6);
  const double T_max = opt_num(cfg, "T_max", h.support_hi() + 2.0);
  const auto orbits = enumerate_orbits_suspension(sys, T_max);
  const cplx rhs = rhs_orbit_sum(orbits, h, T_max);
  const auto rs = resonances_suspension(sys, N, K_final);

  CsvWriter csv({"K", "lhs_re", "lhs_im", "rhs_re", "rhs_im", "gap",
                 "lhs_tail", "rhs_tail"});
  std::vector<double> xs, ys;
  for (int K = 25; K <= K_final; K *= 2) {
    const auto lhs = lhs_resonance_sum(rs, h, K);
    const double gap = std::abs(lhs.value - rhs);
    csv.row({std::to_string(K), fmt_g17(lhs.value.real()),
             fmt_g17(lhs.value.imag()), fmt_g17(rhs.real()),
             fmt_g17(rhs.imag()), fmt_g17(gap), fmt_g17(lhs.tail),
             fmt_g17(0.0)});
    xs.push_back(std::log10(double(K)));
    ys.push_back(std::log10(std::max(gap, 1e-18)));
  }
  const auto lhs = lhs_resonance_sum(rs, h, K_final);
  const double gap = std::abs(lhs.value - rhs);
  csv.row({std::to_string(K_final), fmt_g17(lhs.value.real()),
           fmt_g17(lhs.value.imag()), fmt_g17(rhs.real()), fmt_g17(rhs.imag()),
           fmt_g17(gap), fmt_g17(lhs.tail), fmt_g17(0.0)});
  csv.save((out / "trace_check.csv").string());
  if (plots)
    svg_line_plot((out / "trace_check.svg").string(),
                  "log10 |lhs - rhs| vs log10 K", xs, {ys}, {"log10 gap"});
}

void run_cone_check(const json& cfg, const fs::path& out, bool /*plots*/) {
  Eigen::Matrix2i A;
  if (cfg.contains("A")) {
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) A(i, j) = cfg["A"][i][j].get<int>();
  } else {
    A << 2, 1, 1, 1;
  }
  const int samples = opt_int(cfg, "samples", 10000);
  const auto pair = builder_for_toral_suspension(A.cast<double>());
  const auto rep_t = is_cone_system(pair.theta, samples);
  const auto rep_p = is_cone_system(pair.theta_p, samples);
  const std::vector<Eigen::MatrixXd> dt = {
      suspension_dt_transpose(A.cast<double>())};
  const auto hyp =
      cone_hyperbolic(dt, pair.theta, pair.theta_p, std::max(200, samples / 16));

  CsvWriter csv({"check", "ok", "detail"});
  csv.row({"is_cone_system_theta", rep_t.ok ? "1" : "0",
           std::to_string(rep_t.violations.size()) + "_violations"});
  csv.row({"is_cone_system_theta_prime", rep_p.ok ? "1" : "0",
           std::to_string(rep_p.violations.size()) + "_violations"});
  csv.row({"cone_hyperbolic", hyp.holds ? "1" : "0",
           "Lambda=" + fmt_g17(hyp.Lambda)});
  csv.save((out / "cone_check.csv").string());
  std::ofstream(out / "theta.txt") << serialize(pair.theta);
  std::ofstream(out / "theta_prime.txt") << serialize(pair.theta_p);
}

void run_factorization(const json& cfg, const fs::path& out, bool plots) {
  if (system_type(cfg) != "suspension")
    throw ConfigError("config: factorization needs a suspension system");
  const ToralSuspension sys = parse_suspension(cfg["system"]);
  const double t0 = need_num(cfg, "t0");
  const int d = need_int(cfg, "d");
  const int k_product = need_int(cfg, "k_product");
  const double T_max = opt_num(cfg, "T_max", 30.0);
  const GridSpec gs = parse_grid(cfg.contains("grid") ? cfg["grid"] : json());

  const auto orbits = enumerate_orbits_suspension(sys, T_max);
  const double absc = convergence_abscissa(sys);
  DeterminantGrid grid;
  grid.cutoff = T_max;
  for (int i = 0; i < gs.n_re; ++i)
    for (int j = 0; j < gs.n_im; ++j) {
      const cplx z = grid_point(gs, i, j);
      const auto r = dg_orbit_sum(orbits, z, T_max, absc);
      grid.points.push_back(z);
      grid.values.push_back(r.value);
      grid.tails.push_back(r.tail_bound);
    }
  const auto rs = resonances_suspension(sys, opt_int(cfg, "N", 4), k_product);
  const auto fit = factorization_residual(grid, rs, t0, d);

  CsvWriter csv({"re_z", "im_z", "re_d", "im_d"});
  for (std::size_t i = 0; i < grid.points.size(); ++i)
    csv.row({fmt_g17(grid.points[i].real()), fmt_g17(grid.points[i].imag()),
             fmt_g17(grid.values[i].real()), fmt_g17(grid.values[i].imag())});
  csv.save((out / "factorization_grid.csv").string());

  std::ofstream rep(out / "factorization.txt");
  rep << "max_residual " << fmt_g17(fit.max_residual) << "\ncondition "
      << fmt_g17(fit.condition) << "\nlog_mu " << fmt_g17(fit.log_mu.real())
      << ' ' << fmt_g17(fit.log_mu.imag()) << "\nP";
  for (const auto& c : fit.P)
    rep << ' ' << fmt_g17(c.real()) << ' ' << fmt_g17(c.imag());
  rep << '\n';
  if (plots) {
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < grid.points.size(); ++i) {
      xs.push_back(double(i));
      ys.push_back(std::abs(grid.values[i]));
    }
    svg_line_plot((out / "factorization.svg").string(), "|d_g| over the grid",
                  xs, {ys}, {"|d_g|"});
  }
}

}  // namespace

void run_experiment(const std::string& kind, const json& config,
                    const std::string& out_dir, bool plots) {
  const auto t0 = std::chrono::steady_clock::now();
  const fs::path out(out_dir);
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) throw ConfigError("cannot create output directory " + out_dir);

  if (kind == "singular-values")
    run_singular_values(config, out, plots);
  else if (kind == "orbits")
    run_orbits(config, out, plots);
  else if (kind == "determinant")
    run_determinant(config, out, plots);
  else if (kind == "resonances")
    run_resonances(config, out, plots);
  else if (kind == "trace-check")
    run_trace_check(config, out, plots);
  else if (kind == "cone-check")
    run_cone_check(config, out, plots);
  else if (kind == "factorization")
    run_factorization(config, out, plots);
  else
    throw ConfigError("unknown experiment kind '" + kind + "'");

  const auto t1 = std::chrono::steady_clock::now();
  json manifest;
  manifest["kind"] = kind;
  manifest["config"] = config;
  manifest["version"] = "0.1.0";
  manifest["wall_ms"] =
      std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count();
  std::ofstream(out / "manifest.json") << manifest.dump(2) << '\n';
}

}  // namespace ruelle
