// Copyright 2026 The nqdt Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nqdt/anneal.hpp"
#include "nqdt/ising.hpp"
#include "nqdt/training.hpp"

namespace nqdt {

enum class ExcitedMethod { brauer, penalty };

// How the spectral shift for excited-state training is chosen per grid
// point: |E0| of the just-trained ground state, or a fixed value.
struct DeltaPolicy {
  enum class Kind { abs_ground, fixed };
  Kind kind = Kind::abs_ground;
  double value = 0.0;
};

struct SweepConfig {
  int grid_steps = 21;  // uniform s grid, endpoints included
  TrainingConfig training;
  int hidden = 64;
  ExcitedMethod excited_method = ExcitedMethod::brauer;
  DeltaPolicy delta_policy;
  double penalty_lambda = 1e3;
  bool with_ed = true;  // attach dense-diagonalisation references
};

// Trained spectral data at one grid point.
struct SpectralRecord {
  double s = 0.0;
  double e0 = 0.0;
  double e1 = 0.0;
  Eigen::VectorXd psi0;  // normalised
  Eigen::VectorXd psi1;  // normalised
  double gap = 0.0;
  std::optional<double> e0_ed, e1_ed;
  std::optional<double> relerr0, relerr1;  // percent
  int epochs0 = 0;
  int epochs1 = 0;
  std::vector<std::string> warnings;
};

// Trains ground and first excited networks across the s grid with warm
// starts: each grid point after the first starts from the previous point's
// trained network of the same state. The excited chain starts from an
// independently seeded network at s = 0. A run that hits max_epochs without
// converging aborts with convergence_error naming the grid point.
std::vector<SpectralRecord> run_sweep(const IsingProblem& p,
                                      const AnnealCoefficients& ac,
                                      const SweepConfig& cfg,
                                      std::uint64_t seed);

// Epochs-to-convergence for the ground chain with warm starts against
// independent cold starts at every grid point, same seeds either way.
struct TransferBenefit {
  std::vector<double> s;
  std::vector<int> epochs_transfer;
  std::vector<int> epochs_cold;
  std::vector<bool> converged_transfer;
  std::vector<bool> converged_cold;
};

TransferBenefit transfer_benefit(const IsingProblem& p,
                                 const AnnealCoefficients& ac,
                                 const SweepConfig& cfg, std::uint64_t seed);

struct GapProfile {
  std::vector<double> s;
  std::vector<double> gap;
  int argmin = 0;
};

GapProfile gap_profile(const std::vector<SpectralRecord>& records);

// Sweep CSV: header s,E0,E1,gap,E0_ed,E1_ed,relerr0,relerr1,epochs0,epochs1,
// floats at %.10g, ED columns empty when absent. Read-back returns the
// scalar columns only.
struct SweepRow {
  double s = 0.0;
  double e0 = 0.0;
  double e1 = 0.0;
  double gap = 0.0;
  std::optional<double> e0_ed, e1_ed, relerr0, relerr1;
  int epochs0 = 0;
  int epochs1 = 0;
};

void write_sweep_csv(const std::vector<SpectralRecord>& records,
                     const std::string& path);
std::vector<SweepRow> read_sweep_csv(const std::string& path);

}  // namespace nqdt
