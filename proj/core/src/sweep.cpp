// Copyright 2026 The nqdt Authors
// SPDX-License-Identifier: Apache-2.0

#include "nqdt/sweep.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>

#include "nqdt/errors.hpp"
#include "nqdt/exact.hpp"
#include "nqdt/operator.hpp"
#include "nqdt/random.hpp"

namespace nqdt {

namespace {

void validate_sweep_config(const SweepConfig& cfg) {
  if (cfg.grid_steps < 2) throw input_error("sweep needs at least 2 grid points");
  if (cfg.hidden < 1) throw input_error("hidden width must be positive");
  if (!(cfg.penalty_lambda > 0.0) || !std::isfinite(cfg.penalty_lambda)) {
    throw input_error("penalty weight must be positive and finite");
  }
  if (cfg.delta_policy.kind == DeltaPolicy::Kind::fixed &&
      (!(cfg.delta_policy.value > 0.0) || !std::isfinite(cfg.delta_policy.value))) {
    throw input_error("fixed delta must be positive and finite");
  }
}

double grid_point(int i, int steps) {
  return static_cast<double>(i) / static_cast<double>(steps - 1);
}

void require_converged(const TrainingReport& rep, const char* which, double s) {
  if (!rep.converged) {
    throw convergence_error(std::string(which) +
                            " training hit max_epochs without converging at s = " +
                            std::to_string(s));
  }
}

std::string csv_num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

}  // namespace

std::vector<SpectralRecord> run_sweep(const IsingProblem& p,
                                      const AnnealCoefficients& ac,
                                      const SweepConfig& cfg,
                                      std::uint64_t seed) {
  validate(p);
  validate_sweep_config(cfg);

  WavefunctionAnsatz ground_net =
      WavefunctionAnsatz::init(p.n, cfg.hidden, derive_seed(seed, 0));
  WavefunctionAnsatz excited_net =
      WavefunctionAnsatz::init(p.n, cfg.hidden, derive_seed(seed, 1));

  std::vector<SpectralRecord> records;
  records.reserve(static_cast<std::size_t>(cfg.grid_steps));

  for (int i = 0; i < cfg.grid_steps; ++i) {
    const double s = grid_point(i, cfg.grid_steps);
    const HamiltonianOperator op = build_operator(p, ac, s);

    TrainingConfig tc = cfg.training;
    tc.seed = seed;

    TrainResult g = train_ground(op, ground_net, tc);
    require_converged(g.report, "ground", s);
    ground_net = transfer(g.ansatz);
    const StateVector psi0 = full_state(ground_net);

    const double delta = cfg.delta_policy.kind == DeltaPolicy::Kind::abs_ground
                             ? std::abs(g.report.final_energy)
                             : cfg.delta_policy.value;

    TrainResult e = cfg.excited_method == ExcitedMethod::brauer
                        ? train_excited_brauer(op, psi0, excited_net, tc, delta)
                        : train_excited_penalty(op, {psi0}, {cfg.penalty_lambda},
                                                excited_net, tc);
    require_converged(e.report, "excited", s);
    excited_net = transfer(e.ansatz);
    const StateVector psi1 = full_state(excited_net);

    SpectralRecord rec;
    rec.s = s;
    rec.e0 = g.report.final_energy;
    rec.e1 = e.report.final_energy;
    rec.psi0 = psi0.amps / std::sqrt(psi0.norm_sq);
    rec.psi1 = psi1.amps / std::sqrt(psi1.norm_sq);
    rec.gap = rec.e1 - rec.e0;
    rec.epochs0 = g.report.epochs_run;
    rec.epochs1 = e.report.epochs_run;
    for (const std::string& w : g.report.warnings) rec.warnings.push_back("E0: " + w);
    for (const std::string& w : e.report.warnings) rec.warnings.push_back("E1: " + w);

    if (cfg.with_ed) {
      const Spectrum sp = exact_spectrum(op, 2);
      rec.e0_ed = sp.eigenvalues[0];
      rec.e1_ed = sp.eigenvalues[1];
      rec.relerr0 = 100.0 * relative_error(rec.e0, *rec.e0_ed);
      rec.relerr1 = 100.0 * relative_error(rec.e1, *rec.e1_ed);
    }
    records.push_back(std::move(rec));
  }
  return records;
}

TransferBenefit transfer_benefit(const IsingProblem& p,
                                 const AnnealCoefficients& ac,
                                 const SweepConfig& cfg, std::uint64_t seed) {
  validate(p);
  validate_sweep_config(cfg);

  TransferBenefit out;
  TrainingConfig tc = cfg.training;
  tc.seed = seed;

  // Warm chain: each point starts from the previous trained network. Cold
  // control: point i starts from the seed the warm chain would have used if
  // it began there, so point 0 is identical in both arms by construction.
  WavefunctionAnsatz warm =
      WavefunctionAnsatz::init(p.n, cfg.hidden, derive_seed(seed, 0));
  for (int i = 0; i < cfg.grid_steps; ++i) {
    const double s = grid_point(i, cfg.grid_steps);
    const HamiltonianOperator op = build_operator(p, ac, s);

    TrainResult w = train_ground(op, warm, tc);
    warm = transfer(w.ansatz);

    const WavefunctionAnsatz cold_start =
        WavefunctionAnsatz::init(p.n, cfg.hidden, derive_seed(seed, static_cast<std::uint64_t>(i)));
    TrainResult c = train_ground(op, cold_start, tc);

    out.s.push_back(s);
    out.epochs_transfer.push_back(w.report.epochs_run);
    out.epochs_cold.push_back(c.report.epochs_run);
    out.converged_transfer.push_back(w.report.converged);
    out.converged_cold.push_back(c.report.converged);
  }
  return out;
}

GapProfile gap_profile(const std::vector<SpectralRecord>& records) {
  if (records.empty()) throw input_error("gap profile of an empty sweep");
  GapProfile gp;
  for (const SpectralRecord& r : records) {
    gp.s.push_back(r.s);
    gp.gap.push_back(r.gap);
  }
  gp.argmin = 0;
  for (std::size_t i = 1; i < gp.gap.size(); ++i) {
    if (gp.gap[i] < gp.gap[gp.argmin]) gp.argmin = static_cast<int>(i);
  }
  return gp;
}

void write_sweep_csv(const std::vector<SpectralRecord>& records,
                     const std::string& path) {
  std::ofstream out(path);
  if (!out) throw input_error("cannot write sweep CSV: " + path);
  out << "s,E0,E1,gap,E0_ed,E1_ed,relerr0,relerr1,epochs0,epochs1\n";
  for (const SpectralRecord& r : records) {
    out << csv_num(r.s) << ',' << csv_num(r.e0) << ',' << csv_num(r.e1) << ','
        << csv_num(r.gap) << ',';
    out << (r.e0_ed ? csv_num(*r.e0_ed) : std::string()) << ',';
    out << (r.e1_ed ? csv_num(*r.e1_ed) : std::string()) << ',';
    out << (r.relerr0 ? csv_num(*r.relerr0) : std::string()) << ',';
    out << (r.relerr1 ? csv_num(*r.relerr1) : std::string()) << ',';
    out << r.epochs0 << ',' << r.epochs1 << '\n';
  }
}

std::vector<SweepRow> read_sweep_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw input_error("cannot open sweep CSV: " + path);
  std::string line;
  if (!std::getline(in, line) ||
      line.rfind("s,E0,E1,gap,E0_ed,E1_ed,relerr0,relerr1,epochs0,epochs1", 0) !=
          0) {
    throw input_error("sweep CSV header mismatch: " + path);
  }

  std::vector<SweepRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (line.back() == ',') fields.push_back("");
    if (fields.size() != 10) {
      throw input_error(path + ":" + std::to_string(line_no) +
                        ": expected 10 fields, got " +
                        std::to_string(fields.size()));
    }
    auto num = [&](const std::string& f) -> double {
      char* end = nullptr;
      const double v = std::strtod(f.c_str(), &end);
      if (end == f.c_str() || *end != '\0') {
        throw input_error(path + ":" + std::to_string(line_no) +
                          ": bad number \"" + f + "\"");
      }
      return v;
    };
    auto opt_num = [&](const std::string& f) -> std::optional<double> {
      if (f.empty()) return std::nullopt;
      return num(f);
    };
    SweepRow row;
    row.s = num(fields[0]);
    row.e0 = num(fields[1]);
    row.e1 = num(fields[2]);
    row.gap = num(fields[3]);
    row.e0_ed = opt_num(fields[4]);
    row.e1_ed = opt_num(fields[5]);
    row.relerr0 = opt_num(fields[6]);
    row.relerr1 = opt_num(fields[7]);
    row.epochs0 = static_cast<int>(num(fields[8]));
    row.epochs1 = static_cast<int>(num(fields[9]));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace nqdt
