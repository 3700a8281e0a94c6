#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ruelle/experiments.hpp"

using namespace ruelle;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

int run_binary(const std::string& args) {
#ifdef RUELLE_LAB_BIN
  const std::string cmd = std::string(RUELLE_LAB_BIN) + " " + args +
                          " > /dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return WEXITSTATUS(rc);
#else
  (void)args;
  return -1;
#endif
}

fs::path temp_dir(const std::string& tag) {
  const fs::path p = fs::temp_directory_path() / ("ruelle_test_" + tag);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

}  // namespace

TEST_CASE("run_experiment: orbits CSV and determinism") {
  nlohmann::json cfg;
  cfg["system"] = {{"type", "circle"}, {"degree", 2}};
  cfg["n_max"] = 10;
  const auto d1 = temp_dir("orb1"), d2 = temp_dir("orb2");
  run_experiment("orbits", cfg, d1.string(), false);
  run_experiment("orbits", cfg, d2.string(), false);
  const std::string a = slurp(d1 / "orbits.csv");
  const std::string b = slurp(d2 / "orbits.csv");
  CHECK(!a.empty());
  CHECK(a == b);
  CHECK(a.rfind("T,T_primitive,", 0) == 0);  // header row present

  // per-period point counts are 2^n - 1
  std::istringstream is(a);
  std::string line;
  std::getline(is, line);
  std::map<int, long long> pts;
  while (std::getline(is, line)) {
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ls(line);
    double T, Tp, det, re, im;
    long long cnt;
    ls >> T >> Tp >> det >> re >> im >> cnt;
    pts[int(T)] += cnt * (long long)(Tp);
  }
  for (int n = 1; n <= 10; ++n) {
    long long total = 0;
    for (int m = 1; m <= n; ++m)
      if (n % m == 0) total += pts[m];
    CHECK(total == (1LL << n) - 1);
  }
}

TEST_CASE("run_experiment: singular values artifact") {
  nlohmann::json cfg = {{"alpha", 0.4}, {"beta", 1.0}, {"N", 64}};
  const auto d = temp_dir("sv");
  run_experiment("singular-values", cfg, d.string(), true);
  CHECK(fs::exists(d / "singular_values.csv"));
  CHECK(fs::exists(d / "singular_values.svg"));
  CHECK(fs::exists(d / "manifest.json"));
  // max abs diff column stays below 1e-10
  std::istringstream is(slurp(d / "singular_values.csv"));
  std::string line;
  std::getline(is, line);
  double worst = 0.0;
  while (std::getline(is, line)) {
    const auto pos = line.rfind(',');
    worst = std::max(worst, std::stod(line.substr(pos + 1)));
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("run_experiment: config errors") {
  CHECK_THROWS_AS(run_experiment("orbits", nlohmann::json::object(), "/tmp",
                                 false),
                  ConfigError);
  CHECK_THROWS_AS(
      run_experiment("nonsense", nlohmann::json::object(), "/tmp", false),
      ConfigError);
}

TEST_CASE("binary: exit codes and bit-identical reruns") {
  if (run_binary("--help") < 0) return;  // binary location not wired in

  const auto d = temp_dir("bin");
  {
    std::ofstream os(d / "cfg.json");
    os << R"({"system":{"type":"circle","degree":2},"n_max":8})";
  }
  const std::string base = " orbits --config " + (d / "cfg.json").string();
  CHECK(run_binary(base + " --out " + (d / "r1").string()) == 0);
  CHECK(run_binary(base + " --out " + (d / "r2").string()) == 0);
  CHECK(slurp(d / "r1" / "orbits.csv") == slurp(d / "r2" / "orbits.csv"));

  // config error: missing field
  {
    std::ofstream os(d / "bad.json");
    os << R"({"system":{"type":"circle","degree":2}})";
  }
  CHECK(run_binary(" orbits --config " + (d / "bad.json").string()) == 2);
  // config error: unparsable JSON
  {
    std::ofstream os(d / "broken.json");
    os << "{not json";
  }
  CHECK(run_binary(" orbits --config " + (d / "broken.json").string()) == 2);
  // numerical failure: determinant evaluated outside its half-plane
  {
    std::ofstream os(d / "num.json");
    os << R"({"system":{"type":"suspension","A":[[2,1],[1,1]]},"T_max":10,
         "grid":{"re_lo":-1.0,"re_hi":-0.5,"im_lo":0,"im_hi":0,
                 "n_re":2,"n_im":1}})";
  }
  CHECK(run_binary(" determinant --config " + (d / "num.json").string()) == 3);
}
