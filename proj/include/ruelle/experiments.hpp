#pragma once

#include <stdexcept>
#include <string>

#include <json.hpp>

namespace ruelle {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Runs one experiment kind with a parsed JSON config, writing CSV artifacts,
// a run manifest, and (optionally) SVG plots into out_dir.  Throws
// ConfigError for malformed configs and std::exception for numerical
// failures.
void run_experiment(const std::string& kind, const nlohmann::json& config,
                    const std::string& out_dir, bool plots);

}  // namespace ruelle
