// Copyright 2026 The nqdt Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>

#include "nqdt/ising.hpp"

namespace nqdt {

// Feed-forward wavefunction over spin configurations:
//
//   psi(x) = tanh(w2 . relu(W1 x + b1) + b2),   x in {+1,-1}^n
//
// One hidden layer, real amplitudes in (-1, 1). Small enough that training
// enumerates the full basis, expressive enough to pin low-lying eigenstates
// of transverse-field Ising Hamiltonians to sub-percent energy error.
//
// Flat parameter layout (used by checkpoints and the optimiser):
//   [W1 row-major | b1 | w2 | b2]
class WavefunctionAnsatz {
 public:
  // Weights start uniform in (-1/sqrt(fan_in), 1/sqrt(fan_in)), biases at
  // zero. Identical seeds give identical networks on every platform.
  static WavefunctionAnsatz init(int n, int hidden, std::uint64_t seed);

  // Explicit weights, for hand-built networks in tests and tools.
  WavefunctionAnsatz(Eigen::MatrixXd w1, Eigen::VectorXd b1, Eigen::VectorXd w2,
                     double b2);

  int n_in() const { return static_cast<int>(w1_.cols()); }
  int hidden() const { return static_cast<int>(w1_.rows()); }
  Eigen::Index parameter_count() const;

  double eval(const SpinConfiguration& x) const;
  double eval_index(std::uint64_t index) const;

  // Amplitudes for all 2^n configurations, indexed by configuration.
  Eigen::VectorXd amplitudes() const;

  Eigen::VectorXd parameters() const;
  void set_parameters(const Eigen::VectorXd& theta);

  const Eigen::MatrixXd& w1() const { return w1_; }
  const Eigen::VectorXd& b1() const { return b1_; }
  const Eigen::VectorXd& w2() const { return w2_; }
  double b2() const { return b2_; }

 private:
  Eigen::MatrixXd w1_;  // hidden x n
  Eigen::VectorXd b1_;  // hidden
  Eigen::VectorXd w2_;  // hidden
  double b2_ = 0.0;
};

// Unnormalised state vector with its norm squared alongside; callers divide
// by norm_sq rather than renormalising amplitudes in place.
struct StateVector {
  Eigen::VectorXd amps;
  double norm_sq = 0.0;
};

// Throws convergence_error when the network output is numerically the zero
// vector, which would poison every Born-weighted average downstream.
StateVector full_state(const WavefunctionAnsatz& a);

// Deep copy for warm starts at the next grid point. The copy owns its
// parameters; training it never touches the source.
WavefunctionAnsatz transfer(const WavefunctionAnsatz& src);

// Rows of the matrix are the spin vectors of configurations 0..2^n-1, so
// batched evaluation is a pair of GEMMs. Shared by training and full_state.
Eigen::MatrixXd spin_input_matrix(int n);

// Checkpoint format "nqdt-ansatz-v1": versioned JSON with shape, seed-free
// weights, and the flat parameter vector. Loading a file with a different
// version string is an input error.
void save_checkpoint(const WavefunctionAnsatz& a, const std::string& path);
WavefunctionAnsatz load_checkpoint(const std::string& path);

}  // namespace nqdt
