// Copyright 2026 The nqdt Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace nqdt {

// One two-body coupling J_ij with i < j.
struct Coupling {
  int i = 0;
  int j = 0;
  double value = 0.0;
};

// Classical Ising cost  E(sigma) = sum_i h_i sigma_i + sum_{i<j} J_ij sigma_i sigma_j
// over sigma_i in {+1, -1}, plus a constant offset carried so QUBO objectives
// round-trip exactly.
struct IsingProblem {
  int n = 0;
  std::vector<double> h;
  std::vector<Coupling> couplings;
  double offset = 0.0;
  std::optional<std::uint64_t> seed;  // set when the instance was generated
};

// Throws input_error on inconsistent sizes, out-of-range or non-canonical
// (i >= j, duplicate) couplings, or non-finite values.
void validate(const IsingProblem& p);

// sigma_z eigenvalue of spin i in the computational basis state `index`.
// Bit value 0 means sigma = +1, bit value 1 means sigma = -1, so `index`
// read as a bitstring equals the corresponding QUBO assignment x.
inline int spin_of(std::uint64_t index, int i) {
  return 1 - 2 * static_cast<int>((index >> i) & 1ULL);
}

// Classical energy of one configuration, without the offset.
double ising_energy(const IsingProblem& p, std::uint64_t index);

// All 2^n classical energies, indexed by configuration, without the offset.
Eigen::VectorXd ising_energy_table(const IsingProblem& p);

// A basis configuration as explicit spins, convertible to and from the
// packed index used everywhere else.
struct SpinConfiguration {
  std::vector<int> spins;  // entries are +1 or -1

  static SpinConfiguration from_index(int n, std::uint64_t index);
  std::uint64_t index() const;
};

// Maps minimise x^T Q x over x in {0,1}^n onto the Ising form via
// x_i = (1 - sigma_i)/2. Q is symmetrised first, so any square matrix with
// Q + Q^T equal to the intended quadratic form gives the same problem.
// The returned offset satisfies  x^T Q x = E(sigma(x)) + offset  exactly.
IsingProblem qubo_to_ising(const Eigen::MatrixXd& q);

// Fully connected instance with h_i and J_ij drawn uniformly from [-1, 1).
// Draw order is h_0..h_{n-1}, then J_ij for i ascending and j ascending
// within i; the order is part of the reproducibility contract.
IsingProblem random_instance(int n, std::uint64_t seed);

// Open chain with J_{i,i+1} = 1, h = 0: the standard transverse-field
// Ising benchmark once the annealing Hamiltonian is assembled.
IsingProblem tfim_instance(int n);

// JSON interchange. Couplings serialise as triples [i, j, value].
std::string problem_to_json(const IsingProblem& p);
IsingProblem problem_from_json(const std::string& text);
IsingProblem load_problem(const std::string& path);
void save_problem(const IsingProblem& p, const std::string& path);

}  // namespace nqdt
