// Copyright 2026 The nqdt Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

namespace nqdt {

// One row of a tabulated annealing schedule: the transverse and problem
// envelopes at normalised time s.
struct CoeffSample {
  double s = 0.0;
  double a = 0.0;
  double b = 0.0;
};

// A(s), B(s) and their s-derivatives at one point.
struct CoeffValues {
  double a = 0.0;
  double b = 0.0;
  double da = 0.0;
  double db = 0.0;
};

// Annealing envelopes A(s) and B(s) on s in [0, 1].
//
// The parametric family is
//   A(s) = 2 exp(-gamma s) - 0.06,   B(s) = 2 s^mu
// with defaults gamma = 3.5, mu = 1.8. mu < 1 makes dB/ds singular at s = 0
// and is rejected. The tabulated form interpolates measured hardware curves
// piecewise linearly; derivatives are then piecewise constant, taking the
// right-hand slope at interior breakpoints and the only available slope at
// the ends.
class AnnealCoefficients {
 public:
  static AnnealCoefficients parametric(double gamma = 3.5, double mu = 1.8);

  // Samples must cover s = 0 and s = 1 with strictly increasing s.
  static AnnealCoefficients tabulated(std::vector<CoeffSample> samples);

  // CSV with header "s,A,B".
  static AnnealCoefficients from_csv(const std::string& path);

  // Throws input_error for s outside [0, 1].
  CoeffValues at(double s) const;

  bool is_parametric() const { return samples_.empty(); }
  double gamma() const { return gamma_; }
  double mu() const { return mu_; }
  const std::vector<CoeffSample>& samples() const { return samples_; }

 private:
  AnnealCoefficients() = default;

  double gamma_ = 0.0;
  double mu_ = 0.0;
  std::vector<CoeffSample> samples_;
};

// Operation-style alias for AnnealCoefficients::at.
inline CoeffValues coeffs(const AnnealCoefficients& ac, double s) {
  return ac.at(s);
}

void write_coeff_csv(const AnnealCoefficients& ac, const std::string& path,
                     int grid_points = 101);

}  // namespace nqdt
