// run.cpp — experiment dispatch and deterministic output emission.
//
// Every output file embeds the fully resolved config; numeric CSV fields are
// rendered with %.17g so reruns with the same config and seed are
// byte-identical.  Wall-clock time is returned to the caller for console
// display but never written to a file.
#include "epr/run.hpp"

#include "epr/chsh.hpp"
#include "epr/circuit.hpp"
#include "epr/dissipation.hpp"
#include "epr/gates.hpp"
#include "epr/prep.hpp"
#include "epr/tomo.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace epr {

namespace {

using nlohmann::ordered_json;

std::string csv_quote(const std::string& s) {
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += "\"\"";
    out += ch;
  }
  out += '"';
  return out;
}

std::string csv_header(const std::string& kind, const ordered_json& config) {
  return "# schema: " + std::string(kSchemaTag) + " " + kind +
         "\n# config: " + config.dump() + "\n";
}

void write_text(RunRecord& rec, const std::string& output_dir,
                const std::string& name, const std::string& content) {
  const std::filesystem::path path = std::filesystem::path(output_dir) / name;
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open output file '" + path.string() + "'");
  out << content;
  out.close();
  if (!out) throw std::runtime_error("failed writing output file '" + path.string() + "'");
  rec.files_written.push_back(path.string());
}

void write_json_record(RunRecord& rec, const ExperimentConfig& c,
                       const std::string& kind, const std::string& name) {
  ordered_json doc;
  doc["schema"] = kSchemaTag;
  doc["kind"] = kind;
  doc["config"] = rec.config;
  doc["results"] = rec.results;
  write_text(rec, c.output_dir, name, doc.dump(2) + "\n");
}

// ---------- prepare ----------

double gate_ej_uev(const ConditionalGate& g) {
  return g.qubit == 1 ? g.params.ej1_uev : g.params.ej2_uev;
}

double gate_ec_uev(const ConditionalGate& g) {
  return g.qubit == 1 ? g.params.ec1_uev : g.params.ec2_uev;
}

ordered_json pulse_table_json(const PulseSequence& seq) {
  ordered_json pulses = ordered_json::array();
  int step = 1;
  for (const PulseStep& p : seq.steps) {
    ordered_json row;
    row["step"] = step++;
    row["qubit"] = p.gate.qubit;
    row["sign"] = p.gate.sign;
    row["theta_rad"] = p.gate.theta;
    row["ej_ueV"] = gate_ej_uev(p.gate);
    row["ec_ueV"] = gate_ec_uev(p.gate);
    row["duration_ns"] = p.gate.propagator.duration_ns;
    pulses.push_back(row);
  }
  return pulses;
}

void run_prepare(const ExperimentConfig& c, RunRecord& rec) {
  const BellPreparation prep = prepare_bell(c.target, c.effective.e12_uev);

  double total_ns = 0.0;
  for (const PulseStep& p : prep.sequence.steps)
    total_ns += p.gate.propagator.duration_ns;

  ordered_json res;
  res["target"] = to_string(c.target);
  res["e12_ueV"] = c.effective.e12_uev;
  res["fidelity"] = prep.fidelity;
  res["total_duration_ns"] = total_ns;
  res["pulses"] = pulse_table_json(prep.sequence);
  {
    ordered_json re = ordered_json::array(), im = ordered_json::array();
    for (int i = 0; i < 4; ++i) {
      re.push_back(prep.state(i).real());
      im.push_back(prep.state(i).imag());
    }
    res["state_re"] = re;
    res["state_im"] = im;
  }
  rec.results = res;

  const std::string stem = "prepare_" + to_string(c.target);
  if (c.format == "csv") {
    std::string csv = csv_header("prepare", rec.config);
    csv += "step,qubit,sign,theta_rad,ej_ueV,ec_ueV,duration_ns\n";
    int step = 1;
    for (const PulseStep& p : prep.sequence.steps) {
      csv += std::to_string(step++) + "," + std::to_string(p.gate.qubit) + "," +
             std::to_string(p.gate.sign) + "," + format_double(p.gate.theta) +
             "," + format_double(gate_ej_uev(p.gate)) + "," +
             format_double(gate_ec_uev(p.gate)) + "," +
             format_double(p.gate.propagator.duration_ns) + "\n";
    }
    write_text(rec, c.output_dir, stem + ".csv", csv);
  }
  write_json_record(rec, c, "prepare", stem + ".json");
}

// ---------- tomography ----------

std::vector<std::string> equation_labels(const std::vector<ScheduleRow>& rows) {
  std::vector<std::string> labels;
  for (const ScheduleRow& row : rows) {
    if (!row.determines.empty())
      labels.push_back(row.determines);
    else
      labels.push_back(to_string(row.preop) + "/" + to_string(row.measurement));
  }
  labels.push_back("trace");
  return labels;
}

void run_tomo(const ExperimentConfig& c, RunRecord& rec) {
  const BellPreparation prep = prepare_bell(c.target, c.effective.e12_uev);
  const Mat4 rho_true = density(prep.state);
  const ReconstructionResult r =
      reconstruct(rho_true, c.schedule, c.shots, c.seed);

  const Mat4 rho_target = density(bell_state(c.target));
  // tr(rho_hat rho_target) without the density-validity gate: a shot-noise
  // estimate may carry small negative eigenvalues by design.
  const double fidelity = (r.rho_hat * rho_target).trace().real();

  const Eigen::Matrix<double, 16, 1> x = pack_params(r.rho_hat);
  const std::vector<std::string> labels = param_labels();
  const std::vector<std::string> columns = param_column_names();
  const std::vector<std::string> eq_labels = equation_labels(c.schedule);

  double max_residual = 0.0;
  for (double v : r.residuals) max_residual = std::max(max_residual, v);

  ordered_json res;
  res["target"] = to_string(c.target);
  res["preparation_fidelity"] = prep.fidelity;
  res["fidelity_vs_target"] = fidelity;
  res["shots"] = r.shots;
  res["rank"] = schedule_rank(c.schedule);
  res["condition_number"] = r.condition_number;
  res["min_eigenvalue"] = r.min_eigenvalue;
  res["trace_before_renorm"] = r.trace_before_renorm;
  res["max_residual"] = max_residual;
  {
    ordered_json params;
    for (int i = 0; i < 16; ++i) params[labels[static_cast<std::size_t>(i)]] = x(i);
    res["params"] = params;
  }
  {
    ordered_json residuals = ordered_json::array();
    for (std::size_t i = 0; i < r.residuals.size(); ++i) {
      ordered_json row;
      row["equation"] = i < eq_labels.size() ? eq_labels[i] : std::string("?");
      row["abs_residual"] = r.residuals[i];
      residuals.push_back(row);
    }
    res["residuals"] = residuals;
  }
  rec.results = res;

  const std::string stem = "tomo_" + to_string(c.target);
  if (c.format == "csv") {
    std::string csv = csv_header("tomo", rec.config);
    csv += "label,value\n";
    for (int i = 0; i < 16; ++i)
      csv += columns[static_cast<std::size_t>(i)] + "," + format_double(x(i)) + "\n";
    csv += "fidelity_vs_target," + format_double(fidelity) + "\n";
    csv += "preparation_fidelity," + format_double(prep.fidelity) + "\n";
    csv += "condition_number," + format_double(r.condition_number) + "\n";
    csv += "min_eigenvalue," + format_double(r.min_eigenvalue) + "\n";
    csv += "trace_before_renorm," + format_double(r.trace_before_renorm) + "\n";
    csv += "max_residual," + format_double(max_residual) + "\n";
    csv += "shots," + std::to_string(r.shots) + "\n";
    csv += "rank," + std::to_string(schedule_rank(c.schedule)) + "\n";
    write_text(rec, c.output_dir, stem + ".csv", csv);
  }
  write_json_record(rec, c, "tomo", stem + ".json");
}

// ---------- decay ----------

std::vector<double> time_grid_s(const GridSpec& grid) {
  std::vector<double> t(static_cast<std::size_t>(grid.points));
  const double t_max_s = grid.t_max_us * 1e-6;
  for (int k = 0; k < grid.points; ++k)
    t[static_cast<std::size_t>(k)] =
        t_max_s * static_cast<double>(k) / static_cast<double>(grid.points - 1);
  return t;
}

ordered_json fit_json(const RateFit& fit) {
  ordered_json f;
  f["a_per_s"] = fit.a_per_s;
  f["r_squared"] = fit.r_squared;
  f["window_t_min_s"] = fit.window_t_min_s;
  f["window_t_max_s"] = fit.window_t_max_s;
  f["points_used"] = fit.points_used;
  f["exponential"] = fit.exponential;
  return f;
}

void run_decay(const ExperimentConfig& c, RunRecord& rec) {
  const Mat4 h = build_hamiltonian(c.effective);
  const Mat4 rho0 = density(bell_state(c.target));
  const std::vector<double> grid = time_grid_s(c.grid);
  const Trajectory traj = evolve(rho0, h, c.bath, grid);

  ordered_json res;
  res["target"] = to_string(c.target);
  res["t_max_us"] = c.grid.t_max_us;
  res["points"] = c.grid.points;
  res["concurrence_initial"] = traj.concurrences.front();
  res["concurrence_at_t_max"] = traj.concurrences.back();
  try {
    res["fit"] = fit_json(fit_decay(traj));
    res["fit_error"] = nullptr;
  } catch (const std::invalid_argument& err) {
    res["fit"] = nullptr;
    res["fit_error"] = err.what();
  }
  rec.results = res;

  const std::string stem = "decay_" + to_string(c.target);
  if (c.format == "csv") {
    const std::vector<std::string> columns = param_column_names();
    std::string csv = csv_header("decay", rec.config);
    csv += "t_us,concurrence";
    for (const std::string& col : columns) csv += "," + col;
    csv += "\n";
    for (std::size_t k = 0; k < traj.times_s.size(); ++k) {
      csv += format_double(traj.times_s[k] * 1e6) + "," +
             format_double(traj.concurrences[k]);
      const Eigen::Matrix<double, 16, 1> x = pack_params(traj.states[k]);
      for (int i = 0; i < 16; ++i) csv += "," + format_double(x(i));
      csv += "\n";
    }
    write_text(rec, c.output_dir, stem + ".csv", csv);
  }
  write_json_record(rec, c, "decay", stem + ".json");
}

// ---------- Bell test ----------

void run_chsh(const ExperimentConfig& c, RunRecord& rec) {
  const AngleSet angles{c.chsh.phi_rad, c.chsh.phi_prime_rad, c.chsh.phi_rad,
                        c.chsh.phi_prime_rad};

  ordered_json blocks = ordered_json::array();
  std::string csv = csv_header("chsh", rec.config);
  csv += "em_over_ej,phi1_rad,phi2_rad,delta_c_formula,delta_c_direct,"
         "e_theory,e_counted,n_same,n_diff,f\n";

  for (std::size_t i = 0; i < c.chsh.em_over_ej.size(); ++i) {
    const double em = c.chsh.em_over_ej[i];
    const CHSHResult result =
        chsh_test(em, angles, c.target, c.shots, split_seed(c.seed, i));
    const double alpha =
        EncodingSetting::make(em, angles.phi1_rad, angles.phi2_rad).alpha_rad;

    ordered_json block;
    block["em_over_ej"] = em;
    block["alpha_rad"] = alpha;
    block["cos2_alpha"] = std::cos(alpha) * std::cos(alpha);
    block["f"] = result.f;
    block["violated"] = result.violated;
    if (result.has_counted)
      block["f_counted"] = result.f_counted;
    else
      block["f_counted"] = nullptr;

    ordered_json records = ordered_json::array();
    for (const CorrelationRecord& r : result.records) {
      const EncodingSetting setting =
          EncodingSetting::make(em, r.phi1_rad, r.phi2_rad);
      const double dc_formula = delta_concurrence(setting);
      const double dc_direct = delta_concurrence_direct(setting, c.target);

      ordered_json row;
      row["phi1_rad"] = r.phi1_rad;
      row["phi2_rad"] = r.phi2_rad;
      row["delta_c_formula"] = dc_formula;
      row["delta_c_direct"] = dc_direct;
      row["e_theory"] = r.e_theory;
      if (r.counted) {
        row["e_counted"] = r.e_counted;
        row["n_same"] = r.n_same;
        row["n_diff"] = r.n_diff;
      } else {
        row["e_counted"] = nullptr;
        row["n_same"] = nullptr;
        row["n_diff"] = nullptr;
      }
      records.push_back(row);

      csv += format_double(em) + "," + format_double(r.phi1_rad) + "," +
             format_double(r.phi2_rad) + "," + format_double(dc_formula) +
             "," + format_double(dc_direct) + "," + format_double(r.e_theory) +
             ",";
      if (r.counted)
        csv += format_double(r.e_counted) + "," + std::to_string(r.n_same) +
               "," + std::to_string(r.n_diff);
      else
        csv += ",,";
      csv += "," + format_double(result.f) + "\n";
    }
    block["records"] = records;
    blocks.push_back(block);
  }

  ordered_json res;
  res["target"] = to_string(c.target);
  res["classical_bound"] = classical_bound();
  res["shots"] = c.shots;
  res["blocks"] = blocks;
  rec.results = res;

  if (c.format == "csv") write_text(rec, c.output_dir, "chsh.csv", csv);
  write_json_record(rec, c, "chsh", "chsh.json");
}

// ---------- sweep ----------

void run_sweep(const ExperimentConfig& c, RunRecord& rec) {
  ordered_json rows = ordered_json::array();
  std::string csv = csv_header("sweep", rec.config);
  csv += "e12_ueV,a_per_s,r_squared,exponential,concurrence_at_t_max,error\n";

  const std::vector<double> grid = time_grid_s(c.grid);
  const Mat4 rho0 = density(bell_state(c.target));

  for (double e12 : c.sweep_e12_uev) {
    EffectiveParams ep = c.effective;
    ep.e12_uev = e12;

    ordered_json row;
    row["e12_ueV"] = e12;
    row["a_per_s"] = nullptr;
    row["r_squared"] = nullptr;
    row["exponential"] = nullptr;
    row["concurrence_at_t_max"] = nullptr;
    row["error"] = nullptr;

    std::string a_field, r2_field, exp_field, c_field, err_field;
    try {
      const Trajectory traj = evolve(rho0, build_hamiltonian(ep), c.bath, grid);
      row["concurrence_at_t_max"] = traj.concurrences.back();
      c_field = format_double(traj.concurrences.back());
      try {
        const RateFit fit = fit_decay(traj);
        row["a_per_s"] = fit.a_per_s;
        row["r_squared"] = fit.r_squared;
        row["exponential"] = fit.exponential;
        a_field = format_double(fit.a_per_s);
        r2_field = format_double(fit.r_squared);
        exp_field = fit.exponential ? "1" : "0";
      } catch (const std::invalid_argument& err) {
        row["error"] = err.what();
        err_field = csv_quote(err.what());
      }
    } catch (const std::exception& err) {
      row["error"] = err.what();
      err_field = csv_quote(err.what());
    }

    rows.push_back(row);
    csv += format_double(e12) + "," + a_field + "," + r2_field + "," +
           exp_field + "," + c_field + "," + err_field + "\n";
  }

  ordered_json res;
  res["target"] = to_string(c.target);
  res["t_max_us"] = c.grid.t_max_us;
  res["points"] = c.grid.points;
  res["rows"] = rows;
  rec.results = res;

  if (c.format == "csv") write_text(rec, c.output_dir, "sweep_summary.csv", csv);
  write_json_record(rec, c, "sweep", "sweep.json");
}

// ---------- circuit validation ----------

void run_validate(const ExperimentConfig& c, RunRecord& rec) {
  if (!c.have_circuit)
    throw ConfigError("'validate' requires a 'circuit' section in the config");

  const DerivedEnergies d = derive_effective(c.circuit);
  const std::vector<std::string> warnings =
      validate_charge_regime(c.circuit, c.delta_gap_uev);

  ordered_json res;
  res["ok"] = warnings.empty();
  res["warnings"] = warnings;
  res["ng1"] = c.circuit.ng1();
  res["ng2"] = c.circuit.ng2();
  res["derived"] = {{"ec_box1_ueV", d.ec_box1_uev},
                    {"ec_box2_ueV", d.ec_box2_uev},
                    {"em_ueV", d.em_uev}};
  res["effective"] = {{"ec1_ueV", d.effective.ec1_uev},
                      {"ec2_ueV", d.effective.ec2_uev},
                      {"ej1_ueV", d.effective.ej1_uev},
                      {"ej2_ueV", d.effective.ej2_uev},
                      {"e12_ueV", d.effective.e12_uev}};
  rec.results = res;

  write_json_record(rec, c, "validate", "validate.json");
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return std::string(buf);
}

RunRecord run(const ExperimentConfig& config) {
  const auto t0 = std::chrono::steady_clock::now();

  RunRecord rec;
  rec.config = resolved_config(config);
  std::filesystem::create_directories(config.output_dir);

  if (config.experiment == "prepare")
    run_prepare(config, rec);
  else if (config.experiment == "tomo")
    run_tomo(config, rec);
  else if (config.experiment == "decay")
    run_decay(config, rec);
  else if (config.experiment == "chsh")
    run_chsh(config, rec);
  else if (config.experiment == "sweep")
    run_sweep(config, rec);
  else if (config.experiment == "validate")
    run_validate(config, rec);
  else
    throw ConfigError("unknown experiment '" + config.experiment + "'");

  rec.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return rec;
}

}  // namespace epr
