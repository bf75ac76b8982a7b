// config.cpp — strict JSON config parsing and the resolved echo.
#include "epr/config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <numbers>

namespace epr {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& msg) { throw ConfigError(msg); }

void check_keys(const json& obj, const std::string& path,
                std::initializer_list<const char*> allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* key : allowed)
      if (it.key() == key) {
        known = true;
        break;
      }
    if (!known) fail("unknown config key '" + path + it.key() + "'");
  }
}

double get_num(const json& obj, const std::string& path, const char* key,
               double fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number()) fail("config key '" + path + key + "' must be a number");
  return v.get<double>();
}

long get_long(const json& obj, const std::string& path, const char* key,
              long fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number_integer())
    fail("config key '" + path + key + "' must be an integer");
  return v.get<long>();
}

bool get_bool(const json& obj, const std::string& path, const char* key,
              bool fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_boolean())
    fail("config key '" + path + key + "' must be a boolean");
  return v.get<bool>();
}

std::string get_str(const json& obj, const std::string& path, const char* key,
                    const std::string& fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_string())
    fail("config key '" + path + key + "' must be a string");
  return v.get<std::string>();
}

std::string canon_experiment(const std::string& name) {
  if (name == "tomography") return "tomo";
  if (name == "prepare" || name == "tomo" || name == "decay" ||
      name == "chsh" || name == "sweep" || name == "validate")
    return name;
  fail("unknown experiment '" + name +
       "' (expected prepare|tomo|decay|chsh|sweep|validate)");
}

void parse_circuit(const json& obj, PhysicalCircuitParams& p) {
  const std::string path = "circuit.";
  check_keys(obj, path,
             {"eps_j1_ueV", "eps_j2_ueV", "c_sigma1_fF", "c_sigma2_fF",
              "c_m_fF", "c_g1_fF", "c_g2_fF", "v1_uV", "v2_uV", "phi1_phi0",
              "phi2_phi0", "temperature_K", "ng1", "ng2"});
  p.eps_j1_uev = get_num(obj, path, "eps_j1_ueV", p.eps_j1_uev);
  p.eps_j2_uev = get_num(obj, path, "eps_j2_ueV", p.eps_j2_uev);
  p.c_sigma1_ff = get_num(obj, path, "c_sigma1_fF", p.c_sigma1_ff);
  p.c_sigma2_ff = get_num(obj, path, "c_sigma2_fF", p.c_sigma2_ff);
  p.c_m_ff = get_num(obj, path, "c_m_fF", p.c_m_ff);
  p.c_g1_ff = get_num(obj, path, "c_g1_fF", p.c_g1_ff);
  p.c_g2_ff = get_num(obj, path, "c_g2_fF", p.c_g2_ff);
  p.v1_uv = get_num(obj, path, "v1_uV", p.v1_uv);
  p.v2_uv = get_num(obj, path, "v2_uV", p.v2_uv);
  p.phi1_phi0 = get_num(obj, path, "phi1_phi0", p.phi1_phi0);
  p.phi2_phi0 = get_num(obj, path, "phi2_phi0", p.phi2_phi0);
  p.temperature_k = get_num(obj, path, "temperature_K", p.temperature_k);
  if (obj.contains("ng1")) p.ng1_override = get_num(obj, path, "ng1", 0.0);
  if (obj.contains("ng2")) p.ng2_override = get_num(obj, path, "ng2", 0.0);
}

void parse_effective(const json& obj, EffectiveParams& e) {
  const std::string path = "effective.";
  check_keys(obj, path,
             {"ec1_ueV", "ec2_ueV", "ej1_ueV", "ej2_ueV", "e12_ueV"});
  e.ec1_uev = get_num(obj, path, "ec1_ueV", e.ec1_uev);
  e.ec2_uev = get_num(obj, path, "ec2_ueV", e.ec2_uev);
  e.ej1_uev = get_num(obj, path, "ej1_ueV", e.ej1_uev);
  e.ej2_uev = get_num(obj, path, "ej2_ueV", e.ej2_uev);
  e.e12_uev = get_num(obj, path, "e12_ueV", e.e12_uev);
}

void parse_bath(const json& obj, BathSpec& b) {
  const std::string path = "bath.";
  check_keys(obj, path,
             {"eta", "omega_c_rad_per_s", "temperature_K", "gamma_phi_per_s",
              "beta_xt", "gamma_xt", "lamb_shift"});
  b.eta = get_num(obj, path, "eta", b.eta);
  b.omega_c_rad_per_s =
      get_num(obj, path, "omega_c_rad_per_s", b.omega_c_rad_per_s);
  b.temperature_k = get_num(obj, path, "temperature_K", b.temperature_k);
  b.gamma_phi_per_s = get_num(obj, path, "gamma_phi_per_s", b.gamma_phi_per_s);
  b.beta_xt = get_num(obj, path, "beta_xt", b.beta_xt);
  b.gamma_xt = get_num(obj, path, "gamma_xt", b.gamma_xt);
  b.lamb_shift = get_bool(obj, path, "lamb_shift", b.lamb_shift);
  try {
    b.validate();
  } catch (const std::invalid_argument& err) {
    fail(std::string("bath: ") + err.what());
  }
}

std::vector<double> parse_number_array(const json& v, const std::string& where) {
  if (!v.is_array()) fail("config key '" + where + "' must be an array");
  std::vector<double> out;
  for (const json& item : v) {
    if (!item.is_number())
      fail("config key '" + where + "' must contain numbers only");
    out.push_back(item.get<double>());
  }
  return out;
}

}  // namespace

ExperimentConfig::ExperimentConfig() {
  const double pi = std::numbers::pi;
  effective.e12_uev = 13.75;
  chsh.phi_rad = -pi / 8.0;
  chsh.phi_prime_rad = 3.0 * pi / 8.0;
  schedule = table_schedule();
  sweep_e12_uev = {13.75, 1.375};
}

ExperimentConfig parse_config(const nlohmann::json& doc,
                              const std::string& subcommand) {
  if (!doc.is_object()) fail("config root must be a JSON object");
  check_keys(doc, "",
             {"experiment", "seed", "output_dir", "format", "circuit",
              "effective", "bath", "target", "grid", "shots", "chsh", "sweep",
              "schedule", "delta_gap_ueV"});

  ExperimentConfig c;
  c.experiment = canon_experiment(subcommand);
  if (doc.contains("experiment")) {
    const std::string declared =
        canon_experiment(get_str(doc, "", "experiment", c.experiment));
    if (declared != c.experiment)
      fail("config experiment '" + declared + "' does not match subcommand '" +
           c.experiment + "'");
  }

  if (doc.contains("seed")) {
    const json& v = doc.at("seed");
    if (!v.is_number_integer() ||
        (!v.is_number_unsigned() && v.get<long long>() < 0))
      fail("config key 'seed' must be a nonnegative integer");
    c.seed = v.get<std::uint64_t>();
  }
  c.output_dir = get_str(doc, "", "output_dir", c.output_dir);
  c.format = get_str(doc, "", "format", c.format);
  if (c.format != "csv" && c.format != "json")
    fail("config key 'format' must be \"csv\" or \"json\"");
  c.delta_gap_uev = get_num(doc, "", "delta_gap_ueV", c.delta_gap_uev);
  if (c.delta_gap_uev <= 0.0) fail("config key 'delta_gap_ueV' must be positive");

  if (doc.contains("circuit") && doc.contains("effective"))
    fail("'circuit' and 'effective' are mutually exclusive");
  if (doc.contains("circuit")) {
    parse_circuit(doc.at("circuit"), c.circuit);
    c.have_circuit = true;
    try {
      c.effective = derive_effective(c.circuit).effective;
    } catch (const std::invalid_argument& err) {
      fail(std::string("circuit: ") + err.what());
    }
  }
  if (doc.contains("effective")) parse_effective(doc.at("effective"), c.effective);
  if (doc.contains("bath")) parse_bath(doc.at("bath"), c.bath);

  if (doc.contains("target")) {
    try {
      c.target = bell_label_from_string(get_str(doc, "", "target", ""));
    } catch (const std::invalid_argument& err) {
      fail(err.what());
    }
  }

  if (doc.contains("grid")) {
    const json& g = doc.at("grid");
    check_keys(g, "grid.", {"t_max_us", "points"});
    c.grid.t_max_us = get_num(g, "grid.", "t_max_us", c.grid.t_max_us);
    c.grid.points = static_cast<int>(get_long(g, "grid.", "points", c.grid.points));
    if (c.grid.t_max_us <= 0.0) fail("'grid.t_max_us' must be positive");
    if (c.grid.points < 2 || c.grid.points > 5000000)
      fail("'grid.points' must lie in [2, 5000000]");
  }

  c.shots = get_long(doc, "", "shots", c.shots);
  if (c.shots < 0) fail("config key 'shots' must be >= 0");

  if (doc.contains("chsh")) {
    const json& h = doc.at("chsh");
    check_keys(h, "chsh.", {"em_over_ej", "phi_rad", "phi_prime_rad"});
    if (h.contains("em_over_ej")) {
      c.chsh.em_over_ej = parse_number_array(h.at("em_over_ej"), "chsh.em_over_ej");
      if (c.chsh.em_over_ej.empty()) fail("'chsh.em_over_ej' must be nonempty");
      for (double r : c.chsh.em_over_ej)
        if (r <= 0.0) fail("'chsh.em_over_ej' entries must be positive");
    }
    c.chsh.phi_rad = get_num(h, "chsh.", "phi_rad", c.chsh.phi_rad);
    c.chsh.phi_prime_rad =
        get_num(h, "chsh.", "phi_prime_rad", c.chsh.phi_prime_rad);
  }

  if (doc.contains("sweep")) {
    const json& s = doc.at("sweep");
    check_keys(s, "sweep.", {"e12_ueV"});
    if (s.contains("e12_ueV")) {
      c.sweep_e12_uev = parse_number_array(s.at("e12_ueV"), "sweep.e12_ueV");
      for (double v : c.sweep_e12_uev)
        if (v <= 0.0) fail("'sweep.e12_ueV' entries must be positive");
    }
  }

  if (doc.contains("schedule")) {
    const json& rows = doc.at("schedule");
    if (!rows.is_array()) fail("config key 'schedule' must be an array");
    c.schedule.clear();
    for (const json& r : rows) {
      if (!r.is_object()) fail("'schedule' entries must be objects");
      check_keys(r, "schedule[].", {"preop", "measurement", "determines"});
      ScheduleRow row;
      try {
        row.preop = preop_from_string(get_str(r, "schedule[].", "preop", "none"));
        row.measurement = projective_kind_from_string(
            get_str(r, "schedule[].", "measurement", "P12"));
      } catch (const std::invalid_argument& err) {
        fail(err.what());
      }
      row.determines = get_str(r, "schedule[].", "determines", "");
      c.schedule.push_back(row);
    }
    if (c.schedule.empty()) fail("'schedule' must be nonempty");
  }

  if (c.effective.e12_uev <= 0.0 &&
      (c.experiment == "prepare" || c.experiment == "tomo"))
    fail("'effective.e12_ueV' must be positive for conditional pulses");
  return c;
}

ExperimentConfig load_config_file(const std::string& path,
                                  const std::string& subcommand) {
  std::ifstream in(path);
  if (!in) fail("cannot open config file '" + path + "'");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& err) {
    fail("config parse error in '" + path + "': " + err.what());
  }
  return parse_config(doc, subcommand);
}

nlohmann::ordered_json resolved_config(const ExperimentConfig& c) {
  ordered_json out;
  out["experiment"] = c.experiment;
  out["seed"] = c.seed;
  out["output_dir"] = c.output_dir;
  out["format"] = c.format;
  if (c.have_circuit) {
    ordered_json circ;
    circ["eps_j1_ueV"] = c.circuit.eps_j1_uev;
    circ["eps_j2_ueV"] = c.circuit.eps_j2_uev;
    circ["c_sigma1_fF"] = c.circuit.c_sigma1_ff;
    circ["c_sigma2_fF"] = c.circuit.c_sigma2_ff;
    circ["c_m_fF"] = c.circuit.c_m_ff;
    circ["c_g1_fF"] = c.circuit.c_g1_ff;
    circ["c_g2_fF"] = c.circuit.c_g2_ff;
    circ["v1_uV"] = c.circuit.v1_uv;
    circ["v2_uV"] = c.circuit.v2_uv;
    circ["phi1_phi0"] = c.circuit.phi1_phi0;
    circ["phi2_phi0"] = c.circuit.phi2_phi0;
    circ["temperature_K"] = c.circuit.temperature_k;
    circ["ng1"] = c.circuit.ng1_override ? ordered_json(*c.circuit.ng1_override)
                                         : ordered_json(nullptr);
    circ["ng2"] = c.circuit.ng2_override ? ordered_json(*c.circuit.ng2_override)
                                         : ordered_json(nullptr);
    out["circuit"] = circ;
  } else {
    out["circuit"] = nullptr;
  }
  out["effective"] = {{"ec1_ueV", c.effective.ec1_uev},
                      {"ec2_ueV", c.effective.ec2_uev},
                      {"ej1_ueV", c.effective.ej1_uev},
                      {"ej2_ueV", c.effective.ej2_uev},
                      {"e12_ueV", c.effective.e12_uev}};
  out["delta_gap_ueV"] = c.delta_gap_uev;
  out["bath"] = {{"eta", c.bath.eta},
                 {"omega_c_rad_per_s", c.bath.omega_c_rad_per_s},
                 {"temperature_K", c.bath.temperature_k},
                 {"gamma_phi_per_s", c.bath.gamma_phi_per_s},
                 {"beta_xt", c.bath.beta_xt},
                 {"gamma_xt", c.bath.gamma_xt},
                 {"lamb_shift", c.bath.lamb_shift}};
  out["target"] = to_string(c.target);
  out["grid"] = {{"t_max_us", c.grid.t_max_us}, {"points", c.grid.points}};
  out["shots"] = c.shots;
  {
    ordered_json h;
    h["em_over_ej"] = c.chsh.em_over_ej;
    h["phi_rad"] = c.chsh.phi_rad;
    h["phi_prime_rad"] = c.chsh.phi_prime_rad;
    out["chsh"] = h;
  }
  out["sweep"] = {{"e12_ueV", c.sweep_e12_uev}};
  {
    ordered_json rows = ordered_json::array();
    for (const ScheduleRow& row : c.schedule) {
      ordered_json r;
      r["preop"] = to_string(row.preop);
      r["measurement"] = to_string(row.measurement);
      r["determines"] = row.determines;
      rows.push_back(r);
    }
    out["schedule"] = rows;
  }
  return out;
}

}  // namespace epr
