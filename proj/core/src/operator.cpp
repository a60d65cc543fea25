// Copyright 2026 The nqdt Authors
// SPDX-License-Identifier: Apache-2.0

#include "nqdt/operator.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "nqdt/errors.hpp"

namespace nqdt {

HamiltonianOperator::HamiltonianOperator(int n, Eigen::VectorXd diagonal,
                                         double transverse_weight)
    : n_(n), diagonal_(std::move(diagonal)), transverse_weight_(transverse_weight) {
  if (n_ < 1 || n_ > 20) {
    throw input_error("operator spin count " + std::to_string(n_) +
                      " outside [1, 20]");
  }
  if (diagonal_.size() != (Eigen::Index{1} << n_)) {
    throw input_error("operator diagonal has " +
                      std::to_string(diagonal_.size()) + " entries, expected 2^" +
                      std::to_string(n_));
  }
  if (!diagonal_.allFinite() || !std::isfinite(transverse_weight_)) {
    throw input_error("non-finite operator coefficient");
  }
}

void HamiltonianOperator::add_rank_one(double delta, Eigen::VectorXd state) {
  if (state.size() != dim()) {
    throw input_error("rank-one state has wrong dimension");
  }
  const double norm = state.norm();
  if (std::abs(norm - 1.0) > 1e-9) {
    throw input_error("rank-one state must be unit norm, got |psi| = " +
                      std::to_string(norm));
  }
  if (!std::isfinite(delta)) throw input_error("non-finite rank-one shift");
  rank_one_.push_back({delta, std::move(state)});
}

namespace {

// Shared kernel for real and complex vectors. The flip sum visits each pair
// (x, x ^ bit) once per direction, which is cache-friendlier than gathering
// all n neighbours per row.
template <typename Vec>
void apply_core(int n, const Eigen::VectorXd& diagonal, double w,
                const Vec& v, Vec& out) {
  const Eigen::Index d = v.size();
  for (Eigen::Index x = 0; x < d; ++x) out[x] = diagonal[x] * v[x];
  if (w != 0.0) {
    for (int i = 0; i < n; ++i) {
      const Eigen::Index bit = Eigen::Index{1} << i;
      for (Eigen::Index x = 0; x < d; ++x) {
        if ((x & bit) == 0) {
          out[x] += w * v[x + bit];
          out[x + bit] += w * v[x];
        }
      }
    }
  }
}

}  // namespace

void HamiltonianOperator::apply(const Eigen::VectorXd& v,
                                Eigen::VectorXd& out) const {
  if (v.size() != dim()) throw input_error("apply: vector has wrong dimension");
  out.resize(dim());
  apply_core(n_, diagonal_, transverse_weight_, v, out);
  for (const RankOneTerm& term : rank_one_) {
    out.noalias() += (term.delta * term.state.dot(v)) * term.state;
  }
}

Eigen::VectorXd HamiltonianOperator::apply(const Eigen::VectorXd& v) const {
  Eigen::VectorXd out;
  apply(v, out);
  return out;
}

void HamiltonianOperator::apply(const Eigen::VectorXcd& v,
                                Eigen::VectorXcd& out) const {
  if (v.size() != dim()) throw input_error("apply: vector has wrong dimension");
  out.resize(dim());
  apply_core(n_, diagonal_, transverse_weight_, v, out);
  for (const RankOneTerm& term : rank_one_) {
    const std::complex<double> amp = term.state.cast<std::complex<double>>().dot(v);
    out.noalias() += (term.delta * amp) * term.state.cast<std::complex<double>>();
  }
}

double HamiltonianOperator::quadratic_form(const Eigen::VectorXd& v) const {
  return v.dot(apply(v));
}

Eigen::MatrixXd HamiltonianOperator::dense() const {
  const Eigen::Index d = dim();
  Eigen::MatrixXd m = diagonal_.asDiagonal();
  for (Eigen::Index x = 0; x < d; ++x) {
    for (int i = 0; i < n_; ++i) {
      m(x ^ (Eigen::Index{1} << i), x) += transverse_weight_;
    }
  }
  for (const RankOneTerm& term : rank_one_) {
    m.noalias() += term.delta * term.state * term.state.transpose();
  }
  return m;
}

HamiltonianOperator build_operator(const IsingProblem& p,
                                   const AnnealCoefficients& ac, double s) {
  validate(p);
  const CoeffValues cv = ac.at(s);
  return HamiltonianOperator(p.n, 0.5 * cv.b * ising_energy_table(p),
                             -0.5 * cv.a);
}

HamiltonianOperator d_operator_ds(const IsingProblem& p,
                                  const AnnealCoefficients& ac, double s) {
  validate(p);
  const CoeffValues cv = ac.at(s);
  return HamiltonianOperator(p.n, 0.5 * cv.db * ising_energy_table(p),
                             -0.5 * cv.da);
}

HamiltonianOperator brauer_shift(const HamiltonianOperator& op,
                                 const Eigen::VectorXd& psi, double delta) {
  if (psi.size() != op.dim()) {
    throw input_error("shift state has wrong dimension");
  }
  const double norm = psi.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw input_error("shift state must be nonzero and finite");
  }
  HamiltonianOperator shifted = op;
  shifted.add_rank_one(delta, psi / norm);
  return shifted;
}

}  // namespace nqdt
