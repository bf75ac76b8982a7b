// run.hpp — experiment orchestration: dispatch, deterministic output files
// (CSV tables with a config-echo header, JSON records), and the sweep driver.
#pragma once

#include "epr/config.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace epr {

inline constexpr const char* kSchemaTag = "eprsim/v1";

struct RunRecord {
  nlohmann::ordered_json config;   // resolved echo
  nlohmann::ordered_json results;  // experiment-specific summary
  std::vector<std::string> files_written;
  double wall_seconds = 0.0;       // console diagnostics only, never in files
};

// Executes one experiment and writes its output files under
// config.output_dir.  Identical config + seed produce byte-identical files.
// Throws ConfigError for unusable configs; propagates solver and numerical
// errors from the modules.
RunRecord run(const ExperimentConfig& config);

// %.17g rendering used for every numeric CSV field.
std::string format_double(double value);

}  // namespace epr
