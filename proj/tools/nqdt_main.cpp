// Copyright 2026 The nqdt Authors
// SPDX-License-Identifier: Apache-2.0
//
// Command line front end: instance generation, spectral sweeps, schedule
// synthesis, diabatic transition estimates, and error-statistics reports.
// Every command writes a manifest JSON next to its primary output recording
// inputs (with content hashes), outputs, configuration, and wall time.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "nqdt/anneal.hpp"
#include "nqdt/apt.hpp"
#include "nqdt/control.hpp"
#include "nqdt/errors.hpp"
#include "nqdt/exact.hpp"
#include "nqdt/ising.hpp"
#include "nqdt/sweep.hpp"
#include "nqdt/version.hpp"

namespace {

using nlohmann::json;

std::uint64_t fnv1a64_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw nqdt::input_error("cannot open input for hashing: " + path);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  char buf[8192];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 0x100000001b3ULL;
    }
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "0x%016llx", static_cast<unsigned long long>(v));
  return buf;
}

class ManifestWriter {
 public:
  ManifestWriter(std::string command, json config)
      : start_(std::chrono::steady_clock::now()),
        command_(std::move(command)),
        config_(std::move(config)) {}

  void add_input(const std::string& path) {
    inputs_.push_back({{"path", path}, {"fnv1a64", hex64(fnv1a64_file(path))}});
  }
  void add_output(const std::string& path) { outputs_.push_back(path); }
  void set_seed(std::uint64_t seed) { seed_ = seed; }

  // Written to "<primary output>.manifest.json".
  void write(const std::string& primary_output) const {
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
            .count();
    json j;
    j["command"] = command_;
    j["config"] = config_;
    if (seed_) j["seed"] = *seed_;
    j["inputs"] = inputs_;
    j["outputs"] = outputs_;
    j["version"] = nqdt::kVersion;
    j["wall_seconds"] = wall;
    const std::string path = primary_output + ".manifest.json";
    std::ofstream out(path);
    if (!out) throw nqdt::input_error("cannot write manifest: " + path);
    out << j.dump(2) << "\n";
  }

 private:
  std::chrono::steady_clock::time_point start_;
  std::string command_;
  json config_;
  std::optional<std::uint64_t> seed_;
  json inputs_ = json::array();
  json outputs_ = json::array();
};

std::string stem_of(const std::string& path) {
  const std::size_t dot = path.find_last_of('.');
  const std::size_t slash = path.find_last_of('/');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) {
    return path;
  }
  return path.substr(0, dot);
}

struct CoeffArgs {
  double gamma = 3.5;
  double mu = 1.8;
  std::string coeffs_file;

  nqdt::AnnealCoefficients resolve() const {
    if (!coeffs_file.empty()) {
      return nqdt::AnnealCoefficients::from_csv(coeffs_file);
    }
    return nqdt::AnnealCoefficients::parametric(gamma, mu);
  }
};

void add_coeff_flags(CLI::App* cmd, CoeffArgs& args) {
  cmd->add_option("--gamma", args.gamma,
                  "Decay rate of the transverse envelope A(s)");
  cmd->add_option("--mu", args.mu, "Exponent of the problem envelope B(s)");
  cmd->add_option("--coeffs-file", args.coeffs_file,
                  "Tabulated envelopes as CSV (s,A,B); overrides --gamma/--mu");
}

void print_stats_block(const std::vector<double>& relerr0,
                       const std::vector<double>& relerr1) {
  const nqdt::ErrorStats g = nqdt::error_stats(relerr0);
  const nqdt::ErrorStats e = nqdt::error_stats(relerr1);
  std::printf("state      avg%%      min%%      max%%      std%%\n");
  std::printf("E0    %9.4f %9.4f %9.4f %9.4f\n", g.avg, g.min, g.max, g.std);
  std::printf("E1    %9.4f %9.4f %9.4f %9.4f\n", e.avg, e.min, e.max, e.std);
}

int cmd_gen(const std::string& kind, int n, std::optional<std::uint64_t> seed,
            const std::string& out) {
  json config{{"kind", kind}, {"n", n}, {"out", out}};
  ManifestWriter manifest("gen", config);

  nqdt::IsingProblem p;
  if (kind == "tfim") {
    p = nqdt::tfim_instance(n);
  } else if (kind == "random") {
    if (!seed) {
      throw nqdt::input_error("--seed is required for --kind random");
    }
    manifest.set_seed(*seed);
    p = nqdt::random_instance(n, *seed);
  } else {
    throw nqdt::input_error("unknown instance kind: " + kind);
  }
  nqdt::save_problem(p, out);
  manifest.add_output(out);
  manifest.write(out);
  std::printf("%s\n", out.c_str());
  return 0;
}

int cmd_sweep(const std::string& problem_path, nqdt::SweepConfig cfg,
              const CoeffArgs& coeff_args, std::uint64_t seed,
              const std::string& excited, const std::string& out) {
  cfg.excited_method = excited == "penalty" ? nqdt::ExcitedMethod::penalty
                                            : nqdt::ExcitedMethod::brauer;

  json config{{"problem", problem_path},
              {"grid_steps", cfg.grid_steps},
              {"epochs", cfg.training.max_epochs},
              {"lr", cfg.training.learning_rate},
              {"hidden", cfg.hidden},
              {"window", cfg.training.window},
              {"tol", cfg.training.tol},
              {"excited", excited},
              {"ed", cfg.with_ed},
              {"gamma", coeff_args.gamma},
              {"mu", coeff_args.mu},
              {"coeffs_file", coeff_args.coeffs_file},
              {"out", out}};
  ManifestWriter manifest("sweep", config);
  manifest.set_seed(seed);
  manifest.add_input(problem_path);
  if (!coeff_args.coeffs_file.empty()) manifest.add_input(coeff_args.coeffs_file);

  const nqdt::IsingProblem p = nqdt::load_problem(problem_path);
  const nqdt::AnnealCoefficients ac = coeff_args.resolve();

  const std::vector<nqdt::SpectralRecord> records =
      nqdt::run_sweep(p, ac, cfg, seed);
  nqdt::write_sweep_csv(records, out);
  manifest.add_output(out);

  // Companion control table: the matrix elements needed by `schedule` are
  // computed from the trained states here, while the states are available.
  const std::string control_path = stem_of(out) + ".control.csv";
  nqdt::write_control_csv(nqdt::control_function(records, p, ac), control_path);
  manifest.add_output(control_path);

  for (const nqdt::SpectralRecord& r : records) {
    for (const std::string& w : r.warnings) {
      std::fprintf(stderr, "warning: s = %.4g: %s\n", r.s, w.c_str());
    }
  }
  if (cfg.with_ed) {
    std::vector<double> r0, r1;
    for (const nqdt::SpectralRecord& r : records) {
      r0.push_back(*r.relerr0);
      r1.push_back(*r.relerr1);
    }
    print_stats_block(r0, r1);
  }
  manifest.write(out);
  std::printf("%s\n", out.c_str());
  return 0;
}

int cmd_schedule(const std::string& control_path, double total_time, double sr,
                 int max_points, double slope_limit,
                 std::optional<double> target_total, bool verbose,
                 const std::string& out) {
  json config{{"control", control_path},
              {"total_time", total_time},
              {"sr", sr},
              {"max_points", max_points},
              {"slope_limit", slope_limit},
              {"out", out}};
  if (target_total) config["target_total"] = *target_total;
  ManifestWriter manifest("schedule", config);
  manifest.add_input(control_path);

  const std::vector<nqdt::ControlRow> rows = nqdt::read_control_csv(control_path);
  const std::vector<nqdt::ControlSample> samples = nqdt::control_function(rows);

  for (const nqdt::ControlSample& cs : samples) {
    if (cs.guarded) {
      std::fprintf(stderr,
                   "warning: |gap * E0| underflow at s = %.4g; lambda patched "
                   "to largest finite sample\n",
                   cs.s);
    }
  }
  if (verbose) {
    std::size_t ref = 0;
    for (std::size_t i = 1; i < samples.size(); ++i) {
      if (std::abs(samples[i].s - sr) < std::abs(samples[ref].s - sr)) ref = i;
    }
    std::printf("s         lambda        rate\n");
    for (const nqdt::ControlSample& cs : samples) {
      std::printf("%-8.4g %12.6g %12.6g\n", cs.s, cs.lambda,
                  samples[ref].lambda / cs.lambda);
    }
  }

  const nqdt::ScheduleTable table =
      nqdt::integrate_schedule(samples, total_time, sr);
  const nqdt::OptimizedSchedule sched =
      nqdt::invert_and_resample(table, max_points, slope_limit, target_total);
  for (const std::string& flag : sched.flags) {
    std::fprintf(stderr, "flag: %s\n", flag.c_str());
  }

  nqdt::save_schedule(sched, out);
  manifest.add_output(out);
  const std::string csv_path = stem_of(out) + ".csv";
  nqdt::write_schedule_csv(sched, csv_path);
  manifest.add_output(csv_path);
  manifest.write(out);
  std::printf("%s\n", out.c_str());
  return 0;
}

int cmd_apt(const std::string& problem_path, const std::string& schedule_path,
            int levels, int quad, bool oracle, double dt,
            const CoeffArgs& coeff_args, const std::string& out) {
  json config{{"problem", problem_path}, {"schedule", schedule_path},
              {"levels", levels},        {"quad", quad},
              {"oracle", oracle},        {"dt", dt},
              {"gamma", coeff_args.gamma}, {"mu", coeff_args.mu},
              {"coeffs_file", coeff_args.coeffs_file}, {"out", out}};
  ManifestWriter manifest("apt", config);
  manifest.add_input(problem_path);
  manifest.add_input(schedule_path);
  if (!coeff_args.coeffs_file.empty()) manifest.add_input(coeff_args.coeffs_file);

  if (levels < 1) throw nqdt::input_error("--levels must be at least 1");
  const nqdt::IsingProblem p = nqdt::load_problem(problem_path);
  const nqdt::OptimizedSchedule sched = nqdt::load_schedule(schedule_path);
  const nqdt::AnnealCoefficients ac = coeff_args.resolve();

  json j;
  j["results"] = json::array();
  for (int m = 1; m <= levels; ++m) {
    const nqdt::AptResult r = nqdt::apt_transition(p, ac, sched, m, quad);
    json entry = json::parse(nqdt::apt_result_to_json(r));
    entry["level"] = m;
    j["results"].push_back(entry);
    std::printf("level %d: P = %.6g\n", m, r.probability);
  }
  if (oracle) {
    const nqdt::PropagationResult prop = nqdt::exact_propagation(p, ac, sched, dt);
    j["oracle"] = {{"probabilities", prop.probabilities},
                   {"dt_used", prop.dt_used},
                   {"norm_drift", prop.norm_drift}};
    for (int m = 1; m <= levels && m < static_cast<int>(prop.probabilities.size());
         ++m) {
      std::printf("oracle level %d: P = %.6g\n", m, prop.probabilities[m]);
    }
  }

  std::ofstream f(out);
  if (!f) throw nqdt::input_error("cannot write result file: " + out);
  f << j.dump(2) << "\n";
  manifest.add_output(out);
  manifest.write(out);
  std::printf("%s\n", out.c_str());
  return 0;
}

int cmd_compare(const std::vector<std::string>& sweep_paths,
                const std::string& json_out) {
  json config{{"sweeps", sweep_paths}, {"json_out", json_out}};
  ManifestWriter manifest("compare", config);

  std::vector<double> relerr0, relerr1;
  std::size_t points = 0;
  for (const std::string& path : sweep_paths) {
    manifest.add_input(path);
    const std::vector<nqdt::SweepRow> rows = nqdt::read_sweep_csv(path);
    if (rows.empty()) throw nqdt::input_error("empty sweep CSV: " + path);
    for (const nqdt::SweepRow& row : rows) {
      if (!row.relerr0 || !row.relerr1) {
        throw nqdt::input_error(path +
                                ": missing ED error columns; rerun with --ed");
      }
      relerr0.push_back(*row.relerr0);
      relerr1.push_back(*row.relerr1);
      ++points;
    }
  }

  std::printf("%zu file(s), %zu grid point(s)\n", sweep_paths.size(), points);
  print_stats_block(relerr0, relerr1);

  if (!json_out.empty()) {
    const nqdt::ErrorStats g = nqdt::error_stats(relerr0);
    const nqdt::ErrorStats e = nqdt::error_stats(relerr1);
    json j;
    j["files"] = sweep_paths.size();
    j["points"] = points;
    j["ground"] = {{"avg", g.avg}, {"min", g.min}, {"max", g.max}, {"std", g.std}};
    j["excited"] = {{"avg", e.avg}, {"min", e.min}, {"max", e.max}, {"std", e.std}};
    std::ofstream f(json_out);
    if (!f) throw nqdt::input_error("cannot write stats file: " + json_out);
    f << j.dump(2) << "\n";
    manifest.add_output(json_out);
    manifest.write(json_out);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Digital-twin toolkit for quantum annealing schedules"};
  app.set_version_flag("--version", nqdt::kVersion);
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "Generate a problem instance");
  std::string gen_kind;
  int gen_n = 0;
  std::optional<std::uint64_t> gen_seed;
  std::string gen_out = "problem.json";
  gen->add_option("--kind", gen_kind, "Instance kind: tfim or random")
      ->required();
  gen->add_option("--n", gen_n, "Number of spins")->required();
  gen->add_option("--seed", gen_seed, "RNG seed (required for random)");
  gen->add_option("--out", gen_out, "Output problem JSON path");

  // sweep
  auto* sweep = app.add_subcommand(
      "sweep", "Train ground and excited states across the anneal");
  std::string sweep_problem;
  nqdt::SweepConfig sweep_cfg;
  CoeffArgs sweep_coeffs;
  std::uint64_t sweep_seed = 0;
  std::string sweep_excited = "brauer";
  std::string sweep_out = "sweep.csv";
  sweep->add_option("problem", sweep_problem, "Problem JSON path")->required();
  sweep->add_option("--grid-steps", sweep_cfg.grid_steps, "Grid points in s");
  sweep->add_option("--epochs", sweep_cfg.training.max_epochs,
                    "Epoch budget per state per grid point");
  sweep->add_option("--lr", sweep_cfg.training.learning_rate, "Learning rate");
  sweep->add_option("--hidden", sweep_cfg.hidden, "Hidden layer width");
  sweep->add_option("--window", sweep_cfg.training.window,
                    "Stopping window length");
  sweep->add_option("--tol", sweep_cfg.training.tol,
                    "Stopping std threshold");
  add_coeff_flags(sweep, sweep_coeffs);
  sweep->add_option("--excited", sweep_excited,
                    "Excited-state method: brauer or penalty")
      ->check(CLI::IsMember({"brauer", "penalty"}));
  auto* ed_flag = sweep->add_flag("--ed,!--no-ed", sweep_cfg.with_ed,
                                  "Attach dense-diagonalisation references");
  sweep->add_option("--seed", sweep_seed, "RNG seed")->required();
  sweep->add_option("--out", sweep_out, "Output sweep CSV path");
  (void)ed_flag;

  // schedule
  auto* schedule = app.add_subcommand(
      "schedule", "Synthesise a hardware-ready schedule from a control table");
  std::string sched_control;
  double sched_total = 1.0;
  double sched_sr = 0.0;
  int sched_max_points = 12;
  double sched_slope = 2.0;
  std::optional<double> sched_target;
  bool sched_verbose = false;
  std::string sched_out = "schedule.json";
  schedule->add_option("control", sched_control,
                       "Control CSV (s,E0,E1,me) from sweep")
      ->required();
  schedule->add_option("--total-time", sched_total,
                       "Reference total time scale");
  schedule->add_option("--sr", sched_sr, "Reference point s_r for the pace rule");
  schedule->add_option("--max-points", sched_max_points,
                       "Knot budget for the piecewise-linear schedule");
  schedule->add_option("--slope-limit", sched_slope, "Maximum |ds/dt|");
  schedule->add_option("--target-total", sched_target,
                       "Rescale total time to this value");
  schedule->add_flag("--verbose", sched_verbose, "Echo the control table");
  schedule->add_option("--out", sched_out, "Output schedule JSON path");

  // apt
  auto* apt = app.add_subcommand(
      "apt", "Estimate diabatic transition probabilities for a schedule");
  std::string apt_problem, apt_schedule;
  int apt_levels = 1;
  int apt_quad = 64;
  bool apt_oracle = false;
  double apt_dt = 1e-3;
  CoeffArgs apt_coeffs;
  std::string apt_out = "apt.json";
  apt->add_option("problem", apt_problem, "Problem JSON path")->required();
  apt->add_option("schedule", apt_schedule, "Schedule JSON path")->required();
  apt->add_option("--levels", apt_levels, "Estimate transitions into levels 1..L");
  apt->add_option("--quad", apt_quad, "Quadrature points per schedule segment");
  apt->add_flag("--oracle", apt_oracle,
                "Also integrate the Schrodinger equation as a reference");
  apt->add_option("--dt", apt_dt, "Oracle integrator step");
  add_coeff_flags(apt, apt_coeffs);
  apt->add_option("--out", apt_out, "Output JSON path");

  // compare
  auto* compare = app.add_subcommand(
      "compare", "Aggregate relative-error statistics from sweep CSVs");
  std::vector<std::string> cmp_sweeps;
  std::string cmp_json;
  compare->add_option("sweeps", cmp_sweeps, "Sweep CSV paths")->required();
  compare->add_option("--json-out", cmp_json, "Also write stats as JSON");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) return cmd_gen(gen_kind, gen_n, gen_seed, gen_out);
    if (sweep->parsed()) {
      return cmd_sweep(sweep_problem, sweep_cfg, sweep_coeffs, sweep_seed,
                       sweep_excited, sweep_out);
    }
    if (schedule->parsed()) {
      return cmd_schedule(sched_control, sched_total, sched_sr,
                          sched_max_points, sched_slope, sched_target,
                          sched_verbose, sched_out);
    }
    if (apt->parsed()) {
      return cmd_apt(apt_problem, apt_schedule, apt_levels, apt_quad,
                     apt_oracle, apt_dt, apt_coeffs, apt_out);
    }
    if (compare->parsed()) return cmd_compare(cmp_sweeps, cmp_json);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return nqdt::exit_code_for(e);
  }
  return 0;
}
