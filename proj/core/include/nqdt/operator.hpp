// Copyright 2026 The nqdt Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "nqdt/anneal.hpp"
#include "nqdt/ising.hpp"

namespace nqdt {

// Rank-one correction  delta * |state><state|  with `state` unit norm.
struct RankOneTerm {
  double delta = 0.0;
  Eigen::VectorXd state;
};

// Matrix-free real symmetric operator on the 2^n spin basis:
//
//   H = diag(d) + w * X_total + sum_k delta_k |u_k><u_k|
//
// where X_total flips one spin at a time, i.e. (X_total v)[x] is the sum of
// v over the n single-bit-flip neighbours of x. The annealing Hamiltonian
// uses d[x] = B/2 * E_ising(x) and w = -A/2; rank-one terms carry spectral
// shifts for excited-state work. apply() is O(2^n * n) and never forms the
// dense matrix; dense() exists for small-n checks and the dense eigensolver.
class HamiltonianOperator {
 public:
  HamiltonianOperator(int n, Eigen::VectorXd diagonal, double transverse_weight);

  int n_spins() const { return n_; }
  Eigen::Index dim() const { return diagonal_.size(); }
  const Eigen::VectorXd& diagonal() const { return diagonal_; }
  double transverse_weight() const { return transverse_weight_; }
  const std::vector<RankOneTerm>& rank_one_terms() const { return rank_one_; }

  // Throws input_error when `state` is not unit norm (1e-9 tolerance) or has
  // the wrong dimension.
  void add_rank_one(double delta, Eigen::VectorXd state);

  void apply(const Eigen::VectorXd& v, Eigen::VectorXd& out) const;
  Eigen::VectorXd apply(const Eigen::VectorXd& v) const;
  void apply(const Eigen::VectorXcd& v, Eigen::VectorXcd& out) const;

  // v^T H v for real v.
  double quadratic_form(const Eigen::VectorXd& v) const;

  Eigen::MatrixXd dense() const;

 private:
  int n_ = 0;
  Eigen::VectorXd diagonal_;
  double transverse_weight_ = 0.0;
  std::vector<RankOneTerm> rank_one_;
};

// H(s) = -A(s)/2 * sum_i sigma_x^i + B(s)/2 * (sum_i h_i sigma_z^i
//        + sum_{i<j} J_ij sigma_z^i sigma_z^j).
HamiltonianOperator build_operator(const IsingProblem& p,
                                   const AnnealCoefficients& ac, double s);

// dH/ds, i.e. the same structure with A, B replaced by their s-derivatives.
HamiltonianOperator d_operator_ds(const IsingProblem& p,
                                  const AnnealCoefficients& ac, double s);

// H + delta |psi><psi| / <psi|psi>. When psi approximates the eigenvector of
// an eigenvalue lambda, the shifted operator moves lambda to lambda + delta
// and leaves every other eigenpair in place, which is what lets a ground
// state solver reach excited levels. psi need not be normalised on input.
HamiltonianOperator brauer_shift(const HamiltonianOperator& op,
                                 const Eigen::VectorXd& psi, double delta);

}  // namespace nqdt
