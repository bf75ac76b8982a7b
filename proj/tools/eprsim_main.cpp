// eprsim_main.cpp — command-line front end.
//
// Subcommands: prepare, tomo, decay, chsh, sweep, validate.  Each reads an
// optional JSON config (--config) and applies CLI overrides, runs the
// experiment, writes deterministic output files, and prints a short summary.
//
// Exit codes: 0 success, 2 configuration/parse error, 3 no commensurate
// pulse timing or rank-deficient reconstruction schedule, 4 any other
// runtime failure.
#include <CLI11.hpp>

#include "epr/config.hpp"
#include "epr/gates.hpp"
#include "epr/run.hpp"
#include "epr/tomo.hpp"

#include <cstdint>
#include <cstdio>
#include <string>

namespace {

struct CliOverrides {
  std::string config_path;
  bool have_seed = false;
  std::uint64_t seed = 0;
  std::string out_dir;
  bool have_shots = false;
  long shots = 0;
  std::string format;
};

void add_common_options(CLI::App* sub, CliOverrides& o) {
  sub->add_option("--config", o.config_path, "JSON config file");
  sub->add_option("--seed", o.seed, "RNG seed (overrides config)")
      ->check(CLI::NonNegativeNumber);
  sub->add_option("--out", o.out_dir, "output directory (overrides config)");
  sub->add_option("--shots", o.shots,
                  "projective shots per measurement setting, 0 = exact "
                  "probabilities (overrides config)")
      ->check(CLI::NonNegativeNumber);
  sub->add_option("--format", o.format, "table format: csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
}

int execute(const std::string& subcommand, const CLI::App& sub,
            const CliOverrides& o) {
  try {
    epr::ExperimentConfig config =
        o.config_path.empty()
            ? epr::parse_config(nlohmann::json::object(), subcommand)
            : epr::load_config_file(o.config_path, subcommand);

    if (sub.count("--seed") > 0) config.seed = o.seed;
    if (!o.out_dir.empty()) config.output_dir = o.out_dir;
    if (sub.count("--shots") > 0) {
      if (o.shots < 0) throw epr::ConfigError("--shots must be >= 0");
      config.shots = o.shots;
    }
    if (!o.format.empty()) config.format = o.format;

    const epr::RunRecord record = epr::run(config);

    std::printf("experiment: %s\n", subcommand.c_str());
    std::printf("results: %s\n", record.results.dump().c_str());
    for (const std::string& file : record.files_written)
      std::printf("wrote: %s\n", file.c_str());
    std::printf("wall_seconds: %.3f\n", record.wall_seconds);
    return 0;
  } catch (const epr::ConfigError& err) {
    std::fprintf(stderr, "config error: %s\n", err.what());
    return 2;
  } catch (const epr::NoCommensurateSolution& err) {
    std::fprintf(stderr, "no commensurate solution: %s\n", err.what());
    return 3;
  } catch (const epr::RankDeficient& err) {
    std::fprintf(stderr, "rank-deficient schedule: %s\n", err.what());
    return 3;
  } catch (const std::exception& err) {
    std::fprintf(stderr, "error: %s\n", err.what());
    return 4;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "eprsim — deterministic simulator of a capacitively coupled "
      "charge-qubit pair: Bell-pair preparation, state tomography, "
      "open-system decay, and a Bell-inequality test"};
  app.require_subcommand(1);

  const char* descriptions[6][2] = {
      {"prepare", "solve the two-pulse Bell-pair preparation sequence"},
      {"tomo", "reconstruct the prepared state from projective data"},
      {"decay", "propagate a Bell state under the dissipative model"},
      {"chsh", "run the Bell-inequality test over coupling ratios"},
      {"sweep", "repeat the decay experiment over interbit couplings"},
      {"validate", "check a physical circuit against the operating regime"}};

  CliOverrides overrides[6];
  CLI::App* subs[6];
  for (int i = 0; i < 6; ++i) {
    subs[i] = app.add_subcommand(descriptions[i][0], descriptions[i][1]);
    add_common_options(subs[i], overrides[i]);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);  // prints help or the usage error
    return code == 0 ? 0 : 2;
  }

  for (int i = 0; i < 6; ++i)
    if (subs[i]->parsed()) return execute(descriptions[i][0], *subs[i], overrides[i]);
  return 2;
}
