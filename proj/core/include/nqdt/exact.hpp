// Copyright 2026 The nqdt Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <vector>

#include "nqdt/operator.hpp"

namespace nqdt {

// Dense diagonalisation result. All eigenvalues ascending; only the lowest
// k eigenvectors are retained as columns.
struct Spectrum {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenvectors;
};

// Reference eigenpairs via a dense symmetric solve. The operator is
// materialised, so dimensions above dense_limit (default 4096, n = 12) are
// rejected with capacity_error rather than silently thrashing.
Spectrum exact_spectrum(const HamiltonianOperator& op, int k,
                        Eigen::Index dense_limit = 4096);

// Same solve for an explicit symmetric matrix, any size the caller accepts.
Spectrum dense_spectrum(const Eigen::MatrixXd& sym, int k);

// |e_model - e_exact| / |e_exact|. When |e_exact| < 1e-12 the ratio is
// meaningless; the absolute error is returned instead and *absolute_fallback
// (if given) is set.
double relative_error(double e_model, double e_exact,
                      bool* absolute_fallback = nullptr);

struct ErrorStats {
  double avg = 0.0;
  double min = 0.0;
  double max = 0.0;
  double std = 0.0;  // population standard deviation
};

// Summary of an error series (typically percentages across a sweep).
// Throws input_error on an empty series.
ErrorStats error_stats(const std::vector<double>& errors);

}  // namespace nqdt
