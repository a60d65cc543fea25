// Copyright 2026 The nqdt Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "nqdt/ansatz.hpp"
#include "nqdt/operator.hpp"

namespace nqdt {

struct TrainingConfig {
  double learning_rate = 0.003;
  int max_epochs = 10000;
  // Stopping rule: population std of the last `window` trace energies
  // drops below `tol`.
  int window = 200;
  double tol = 1e-4;
  double rms_decay = 0.9;
  double rms_epsilon = 1e-8;
  // Penalty runs additionally require the summed squared overlap with the
  // frozen lower states to sit below this before stopping.
  double ortho_tol = 1e-3;
  std::uint64_t seed = 0;
};

enum class StopReason { variance, max_epochs, orthogonality_variance };

const char* to_string(StopReason r);

struct TrainingReport {
  double final_energy = 0.0;
  int epochs_run = 0;
  std::vector<double> energy_trace;  // one entry per epoch, pre-update
  bool converged = false;
  StopReason stop_reason = StopReason::max_epochs;
  // Summed squared normalised overlap with the frozen states at exit;
  // NaN for runs without orthogonality constraints.
  double final_orthogonality;
  std::vector<std::string> warnings;

  TrainingReport();
};

// True once trace holds at least `window` entries whose population std over
// the trailing window is strictly below tol.
bool stop_check(const std::vector<double>& trace, int window, double tol);

// E_loc(x) = sum_x' <x|H|x'> psi(x') / psi(x). Throws input_error when
// psi(x) = 0; Born-weighted callers mask those configurations instead.
double local_energy(const StateVector& psi, std::uint64_t index,
                    const HamiltonianOperator& op);
double local_energy(const WavefunctionAnsatz& a, const SpinConfiguration& x,
                    const HamiltonianOperator& op);

// Born-weighted sum of local energies over the full basis, equal to the
// Rayleigh quotient <psi|H|psi> / <psi|psi> up to roundoff.
double energy_expectation(const StateVector& psi, const HamiltonianOperator& op);
double energy_expectation(const WavefunctionAnsatz& a,
                          const HamiltonianOperator& op);

// Exact gradient of the energy expectation with respect to the flat
// parameter vector, by backpropagating the residual 2 (H psi - E psi) / Z
// through the network over the full basis.
Eigen::VectorXd gradient(const WavefunctionAnsatz& a,
                         const HamiltonianOperator& op);

struct TrainResult {
  WavefunctionAnsatz ansatz;
  TrainingReport report;
};

// RMSprop descent on the energy expectation from the given initial network.
// The step size starts at learning_rate and halves whenever the objective
// fails to improve by tol over a full window, so terminal oscillations damp
// out instead of holding the variance rule open. The returned parameters are
// the ones whose energy equals report.final_energy and energy_trace.back().
// A run that exhausts max_epochs is reported, not thrown; callers decide
// whether stale convergence is fatal.
TrainResult train_ground(const HamiltonianOperator& op,
                         const WavefunctionAnsatz& start,
                         const TrainingConfig& cfg);

// Excited-state training via the rank-one spectral shift: minimises the
// ground state of  H + delta |psi0><psi0| / <psi0|psi0>.  With delta at
// least the ground-to-target spacing the shifted ground state is the first
// excited state of H. The guard diagonalises both operators (dense sizes
// only) and warns in the report when the shift failed to promote the first
// excited level, e.g. when a fixed delta is too small.
TrainResult train_excited_brauer(const HamiltonianOperator& op,
                                 const StateVector& psi0,
                                 const WavefunctionAnsatz& start,
                                 const TrainingConfig& cfg, double delta,
                                 bool promotion_guard = true);

// Excited-state training by penalising overlap with frozen lower states:
// minimises  E[psi] + sum_k lambda_k <psi_k|psi>^2 / (<psi_k|psi_k><psi|psi>).
// Implemented as ground-state descent on the penalty-augmented operator; the
// reported energy trace is measured against the original H. Stops only when
// the variance rule holds and the residual overlap is below cfg.ortho_tol.
TrainResult train_excited_penalty(const HamiltonianOperator& op,
                                  const std::vector<StateVector>& lower,
                                  const std::vector<double>& lambdas,
                                  const WavefunctionAnsatz& start,
                                  const TrainingConfig& cfg);

// sum_k <psi_k|psi>^2 / (<psi_k|psi_k> <psi|psi>), the quantity the penalty
// stopping rule thresholds.
double orthogonality_measure(const StateVector& psi,
                             const std::vector<StateVector>& lower);

// JSON summary of a report. trace_stride 0 omits the trace entirely;
// stride k > 0 keeps every k-th entry plus the last.
std::string report_to_json(const TrainingReport& r, int trace_stride = 0);

}  // namespace nqdt
