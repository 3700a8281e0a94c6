#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "ruelle/experiments.hpp"
#include "ruelle/parallel.hpp"

int main(int argc, char** argv) {
  CLI::App app{"ruelle-lab: transfer-operator and trace-formula experiments"};
  app.require_subcommand(1);

  std::string config_path, out_dir = "out";
  int threads = 0;
  bool no_plots = false;

  const std::vector<std::string> kinds = {
      "orbits",         "determinant", "resonances",   "trace-check",
      "singular-values", "cone-check",  "factorization"};
  for (const auto& kind : kinds) {
    auto* sub = app.add_subcommand(kind);
    sub->add_option("--config", config_path, "JSON config file")->required();
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--threads", threads, "worker threads (0 = all cores)");
    sub->add_flag("--no-plots", no_plots, "skip SVG plot emission");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;  // bad usage is a config error
  }
  const std::string kind = app.get_subcommands().front()->get_name();

  nlohmann::json config;
  try {
    std::ifstream is(config_path);
    if (!is) throw ruelle::ConfigError("cannot open config " + config_path);
    is >> config;
  } catch (const nlohmann::json::parse_error& e) {
    std::cerr << "config parse error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  }

  ruelle::set_thread_count(threads);
  try {
    ruelle::run_experiment(kind, config, out_dir, !no_plots);
  } catch (const ruelle::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
