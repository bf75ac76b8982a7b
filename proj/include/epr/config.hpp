// config.hpp — strict experiment configuration: JSON ingestion with unknown
// keys rejected, all defaults made explicit in a resolved echo.
#pragma once

#include "epr/circuit.hpp"
#include "epr/dissipation.hpp"
#include "epr/prep.hpp"
#include "epr/tomo.hpp"

#include <json.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace epr {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GridSpec {
  double t_max_us = 0.2;
  int points = 400;
};

struct ChshSpec {
  std::vector<double> em_over_ej = {1.0, 0.1, 0.01};
  double phi_rad = 0.0;        // set to -pi/8 by default in the constructor
  double phi_prime_rad = 0.0;  // 3pi/8
};

struct ExperimentConfig {
  std::string experiment;  // prepare | tomo | decay | chsh | sweep | validate
  std::uint64_t seed = 1;
  std::string output_dir = "out";
  std::string format = "csv";  // csv | json (table format; JSON always kept)

  bool have_circuit = false;
  PhysicalCircuitParams circuit;
  EffectiveParams effective;   // resolved from `circuit` when given
  double delta_gap_uev = 240.0;

  BathSpec bath;
  BellLabel target = BellLabel::psi_plus;
  GridSpec grid;
  long shots = 0;

  ChshSpec chsh;
  std::vector<double> sweep_e12_uev;      // decay sweep grid
  std::vector<ScheduleRow> schedule;      // tomography rows

  ExperimentConfig();
};

// Parses and validates a config document for the given subcommand.  Unknown
// keys anywhere, type mismatches, out-of-range values, or an `experiment`
// field that contradicts the subcommand raise ConfigError.
ExperimentConfig parse_config(const nlohmann::json& doc,
                              const std::string& subcommand);

ExperimentConfig load_config_file(const std::string& path,
                                  const std::string& subcommand);

// Full echo of the configuration with every default explicit; embedded in
// each output file so runs are self-describing and reproducible.
nlohmann::ordered_json resolved_config(const ExperimentConfig& config);

}  // namespace epr
