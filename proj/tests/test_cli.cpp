// test_cli.cpp — end-to-end command-line behavior: exit codes, strict config
// rejection, emitted files, and byte-level determinism of repeated runs.
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#ifndef _WIN32
#include <sys/wait.h>
#endif

namespace fs = std::filesystem;

namespace {

struct CliResult {
  int code = -1;
  std::string output;  // stdout + stderr interleaved
};

fs::path fresh_dir(const std::string& hint) {
  static int counter = 0;
  const fs::path root = fs::temp_directory_path() /
                        ("eprsim_cli_" + std::to_string(::getpid()));
  const fs::path dir = root / (hint + "_" + std::to_string(counter++));
  fs::create_directories(dir);
  return dir;
}

std::string write_config(const fs::path& dir, const std::string& body) {
  const fs::path p = dir / "config.json";
  std::ofstream out(p);
  out << body;
  return p.string();
}

CliResult run_cli(const std::string& args) {
  const fs::path capture = fresh_dir("capture") / "output.txt";
  const std::string cmd = std::string(EPRSIM_CLI_PATH) + " " + args + " > " +
                          capture.string() + " 2>&1";
  const int raw = std::system(cmd.c_str());
  CliResult res;
#ifndef _WIN32
  if (WIFEXITED(raw)) res.code = WEXITSTATUS(raw);
#else
  res.code = raw;
#endif
  std::ifstream in(capture);
  std::ostringstream ss;
  ss << in.rdbuf();
  res.output = ss.str();
  return res;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("prepare succeeds, writes both tables, echoes resolved defaults") {
  const fs::path dir = fresh_dir("prep");
  const std::string cfg = write_config(dir, R"({"target": "phi_plus"})");
  const CliResult res =
      run_cli("prepare --config " + cfg + " --out " + (dir / "out").string());
  CHECK(res.code == 0);
  CHECK(res.output.find("wrote:") != std::string::npos);

  const fs::path csv = dir / "out" / "prepare_phi_plus.csv";
  const fs::path json = dir / "out" / "prepare_phi_plus.json";
  REQUIRE(fs::exists(csv));
  REQUIRE(fs::exists(json));

  const std::string json_text = slurp(json);
  CHECK(json_text.find("\"schema\": \"eprsim/v1\"") != std::string::npos);
  // Defaults are made explicit in the echo even when absent from the input.
  CHECK(json_text.find("\"e12_ueV\": 13.75") != std::string::npos);
  CHECK(json_text.find("\"seed\": 1") != std::string::npos);
  const std::string csv_text = slurp(csv);
  CHECK(csv_text.rfind("# schema: eprsim/v1", 0) == 0);
  CHECK(csv_text.find("# config:") != std::string::npos);
}

TEST_CASE("unknown config keys are rejected with exit 2") {
  const fs::path dir = fresh_dir("badkey");
  const std::string cfg =
      write_config(dir, R"({"target": "psi_plus", "targett": "oops"})");
  const CliResult res =
      run_cli("prepare --config " + cfg + " --out " + (dir / "out").string());
  CHECK(res.code == 2);
  CHECK(res.output.find("targett") != std::string::npos);
}

TEST_CASE("malformed json is rejected with exit 2") {
  const fs::path dir = fresh_dir("badjson");
  const std::string cfg = write_config(dir, "{ not json");
  const CliResult res =
      run_cli("prepare --config " + cfg + " --out " + (dir / "out").string());
  CHECK(res.code == 2);
}

TEST_CASE("experiment field contradicting the subcommand exits 2") {
  const fs::path dir = fresh_dir("mismatch");
  const std::string cfg = write_config(dir, R"({"experiment": "decay"})");
  const CliResult res =
      run_cli("prepare --config " + cfg + " --out " + (dir / "out").string());
  CHECK(res.code == 2);
}

TEST_CASE("type mismatches in config values exit 2") {
  const fs::path dir = fresh_dir("badtype");
  const std::string cfg = write_config(dir, R"({"seed": "abc"})");
  const CliResult res =
      run_cli("prepare --config " + cfg + " --out " + (dir / "out").string());
  CHECK(res.code == 2);
}

TEST_CASE("usage errors exit 2, help exits 0") {
  const fs::path dir = fresh_dir("usage");
  CHECK(run_cli("").code == 2);                      // missing subcommand
  CHECK(run_cli("frobnicate").code == 2);            // unknown subcommand
  CHECK(run_cli("prepare --frobnicate x --config " +
                write_config(dir, "{}"))
            .code == 2);                             // unknown flag
  CHECK(run_cli("--help").code == 0);
  CHECK(run_cli("prepare --help").code == 0);
}

TEST_CASE("missing config file exits 2") {
  const fs::path dir = fresh_dir("nofile");
  const CliResult res = run_cli("prepare --config " +
                                (dir / "does_not_exist.json").string() +
                                " --out " + (dir / "out").string());
  CHECK(res.code == 2);
}

TEST_CASE("rank-deficient reconstruction schedule exits 3") {
  const fs::path dir = fresh_dir("rank");
  const std::string cfg = write_config(dir, R"({
    "shots": 0,
    "schedule": [
      {"preop": "none", "measurement": "P12", "determines": "rho11,11"}
    ]
  })");
  const CliResult res =
      run_cli("tomo --config " + cfg + " --out " + (dir / "out").string());
  CHECK(res.code == 3);
  CHECK(res.output.find("rank") != std::string::npos);
}

TEST_CASE("identical config and seed reproduce identical bytes") {
  const fs::path dir = fresh_dir("det");
  const std::string cfg = write_config(dir, R"({
    "shots": 20000,
    "chsh": {"em_over_ej": [0.1]}
  })");
  const std::string out = (dir / "out").string();

  REQUIRE(run_cli("chsh --config " + cfg + " --out " + out).code == 0);
  const std::string csv1 = slurp(dir / "out" / "chsh.csv");
  const std::string json1 = slurp(dir / "out" / "chsh.json");

  REQUIRE(run_cli("chsh --config " + cfg + " --out " + out).code == 0);
  CHECK(slurp(dir / "out" / "chsh.csv") == csv1);
  CHECK(slurp(dir / "out" / "chsh.json") == json1);

  // A different seed changes the counted statistics.
  REQUIRE(run_cli("chsh --config " + cfg + " --out " + out + " --seed 7")
              .code == 0);
  CHECK(slurp(dir / "out" / "chsh.csv") != csv1);
}

TEST_CASE("json format suppresses the csv table") {
  const fs::path dir = fresh_dir("fmt");
  const std::string cfg = write_config(dir, R"({
    "format": "json",
    "grid": {"t_max_us": 0.05, "points": 24}
  })");
  const CliResult res =
      run_cli("decay --config " + cfg + " --out " + (dir / "out").string());
  CHECK(res.code == 0);
  CHECK(fs::exists(dir / "out" / "decay_psi_plus.json"));
  CHECK(!fs::exists(dir / "out" / "decay_psi_plus.csv"));
}

TEST_CASE("command-line seed and shots overrides reach the run") {
  const fs::path dir = fresh_dir("override");
  const std::string cfg =
      write_config(dir, R"({"chsh": {"em_over_ej": [0.01]}})");
  const CliResult res = run_cli("chsh --config " + cfg + " --out " +
                                (dir / "out").string() +
                                " --shots 1000 --seed 9");
  CHECK(res.code == 0);
  const std::string json_text = slurp(dir / "out" / "chsh.json");
  CHECK(json_text.find("\"shots\": 1000") != std::string::npos);
  CHECK(json_text.find("\"seed\": 9") != std::string::npos);
  CHECK(json_text.find("\"n_same\"") != std::string::npos);
}

TEST_CASE("validate reports the derived energies and regime warnings") {
  const fs::path dir = fresh_dir("validate");
  const std::string cfg = write_config(dir, R"({"circuit": {}})");
  const CliResult res =
      run_cli("validate --config " + cfg + " --out " + (dir / "out").string());
  CHECK(res.code == 0);
  const std::string json_text = slurp(dir / "out" / "validate.json");
  CHECK(json_text.find("\"warnings\"") != std::string::npos);
  CHECK(json_text.find("1070.79") != std::string::npos);  // box charging energy
  CHECK(json_text.find("53.539") != std::string::npos);   // interbit coupling

  // validate without a circuit block is a config error.
  const std::string cfg2 = write_config(fresh_dir("validate2"), "{}");
  CHECK(run_cli("validate --config " + cfg2 + " --out " +
                (dir / "out2").string())
            .code == 2);
}

}  // TEST_SUITE
