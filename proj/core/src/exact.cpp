// Copyright 2026 The nqdt Authors
// SPDX-License-Identifier: Apache-2.0

#include "nqdt/exact.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nqdt/errors.hpp"

namespace nqdt {

Spectrum dense_spectrum(const Eigen::MatrixXd& sym, int k) {
  if (sym.rows() != sym.cols() || sym.rows() < 1) {
    throw input_error("spectrum: matrix must be square and non-empty");
  }
  if (k < 1 || k > sym.rows()) {
    throw input_error("spectrum: k = " + std::to_string(k) +
                      " outside [1, " + std::to_string(sym.rows()) + "]");
  }
  if (!sym.isApprox(sym.transpose(), 1e-12)) {
    throw input_error("spectrum: matrix is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym);
  if (solver.info() != Eigen::Success) {
    throw convergence_error("dense eigensolver failed to converge");
  }
  Spectrum sp;
  sp.eigenvalues = solver.eigenvalues();
  sp.eigenvectors = solver.eigenvectors().leftCols(k);
  return sp;
}

Spectrum exact_spectrum(const HamiltonianOperator& op, int k,
                        Eigen::Index dense_limit) {
  if (op.dim() > dense_limit) {
    throw capacity_error("operator dimension " + std::to_string(op.dim()) +
                         " exceeds dense solver limit " +
                         std::to_string(dense_limit));
  }
  return dense_spectrum(op.dense(), k);
}

double relative_error(double e_model, double e_exact, bool* absolute_fallback) {
  if (absolute_fallback != nullptr) *absolute_fallback = false;
  const double diff = std::abs(e_model - e_exact);
  if (std::abs(e_exact) < 1e-12) {
    if (absolute_fallback != nullptr) *absolute_fallback = true;
    return diff;
  }
  return diff / std::abs(e_exact);
}

ErrorStats error_stats(const std::vector<double>& errors) {
  if (errors.empty()) throw input_error("error_stats: empty series");
  ErrorStats st;
  st.min = *std::min_element(errors.begin(), errors.end());
  st.max = *std::max_element(errors.begin(), errors.end());
  double sum = 0.0;
  for (double e : errors) sum += e;
  st.avg = sum / static_cast<double>(errors.size());
  double var = 0.0;
  for (double e : errors) var += (e - st.avg) * (e - st.avg);
  st.std = std::sqrt(var / static_cast<double>(errors.size()));
  return st;
}

}  // namespace nqdt
