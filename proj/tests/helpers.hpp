// Copyright 2026 The nqdt Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>

#include "nqdt/ising.hpp"

namespace nqdt_test {

// Independent dense construction of the annealing Hamiltonian from explicit
// Pauli Kronecker products. Deliberately avoids the library's diagonal-table
// and bit-flip machinery so operator tests compare two unrelated routes.
inline Eigen::MatrixXd kron(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  Eigen::MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

// Single-site operator on spin i under the convention that bit i of the
// configuration index carries spin i (bit value 0 means sigma_z = +1).
inline Eigen::MatrixXd op_on_spin(int n, int i, const Eigen::MatrixXd& site) {
  const auto eye = [](Eigen::Index d) {
    return Eigen::MatrixXd(Eigen::MatrixXd::Identity(d, d));
  };
  return kron(eye(Eigen::Index{1} << (n - 1 - i)),
              kron(site, eye(Eigen::Index{1} << i)));
}

inline Eigen::MatrixXd pauli_x() {
  Eigen::MatrixXd x(2, 2);
  x << 0, 1, 1, 0;
  return x;
}

inline Eigen::MatrixXd pauli_z() {
  Eigen::MatrixXd z(2, 2);
  z << 1, 0, 0, -1;
  return z;
}

// -a/2 sum_i X_i + b/2 (sum_i h_i Z_i + sum_{i<j} J_ij Z_i Z_j)
inline Eigen::MatrixXd dense_annealing_hamiltonian(const nqdt::IsingProblem& p,
                                                   double a, double b) {
  const Eigen::Index dim = Eigen::Index{1} << p.n;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
  for (int i = 0; i < p.n; ++i) {
    h -= 0.5 * a * op_on_spin(p.n, i, pauli_x());
    h += 0.5 * b * p.h[static_cast<std::size_t>(i)] *
         op_on_spin(p.n, i, pauli_z());
  }
  for (const nqdt::Coupling& c : p.couplings) {
    h += 0.5 * b * c.value *
         (op_on_spin(p.n, c.i, pauli_z()) * op_on_spin(p.n, c.j, pauli_z()));
  }
  return h;
}

inline Eigen::MatrixXd random_symmetric(Eigen::Index d, std::uint64_t seed) {
  std::mt19937_64 eng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Eigen::MatrixXd m(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) m(i, j) = dist(eng);
  }
  return Eigen::MatrixXd(0.5 * (m + m.transpose()));
}

inline Eigen::VectorXd random_vector(Eigen::Index d, std::uint64_t seed) {
  std::mt19937_64 eng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Eigen::VectorXd v(d);
  for (Eigen::Index i = 0; i < d; ++i) v[i] = dist(eng);
  return v;
}

}  // namespace nqdt_test
