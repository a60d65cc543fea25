// Copyright 2026 The nqdt Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <string>
#include <vector>

#include "nqdt/anneal.hpp"
#include "nqdt/control.hpp"
#include "nqdt/ising.hpp"

namespace nqdt {

// First-order adiabatic perturbation theory estimate of the transition
// amplitude into level m over one anneal:
//
//   c_m(T) = - int_0^T  <m(s)| dH/ds |0(s)> / (E0 - Em) * ds/dt * e^{i phi(t)} dt,
//   phi(t) = int_0^t (Em - E0) dt'.
//
// The schedule is piecewise linear, so ds/dt is constant per segment and the
// integral is a composite trapezoid over each segment with eigenpairs from
// dense diagonalisation at every quadrature node. Eigenvector gauge is fixed
// by sign continuity along the node chain.
struct AptResult {
  std::complex<double> amplitude;
  double probability = 0.0;
  std::vector<double> segment_magnitudes;  // |per-segment contribution|
};

// Gauge hook for tests: flips the initial sign choice of either eigenvector
// chain. Physical outputs must not change.
struct AptGauge {
  bool flip_ground = false;
  bool flip_excited = false;
};

// Throws singularity_error when E0 and Em collide at a quadrature node
// (message names s and t), capacity_error above the dense-solver limit.
AptResult apt_transition(const IsingProblem& p, const AnnealCoefficients& ac,
                         const OptimizedSchedule& schedule, int target_level,
                         int quad_points_per_segment = 64,
                         const AptGauge& gauge = {});

// Reference dynamics: RK4 integration of the Schrodinger equation along the
// same schedule from the exact initial ground state. Runs at dt and dt/2 and
// fails with convergence_error when any final-level probability moves by
// more than 1% (with 1e-9 absolute floor) between the two, so a passing
// result is step-size converged. Probabilities are reported from the dt/2
// run for every final eigenlevel.
struct PropagationResult {
  std::vector<double> probabilities;  // indexed by final eigenlevel
  double dt_used = 0.0;
  double norm_drift = 0.0;  // | <psi|psi> - 1 | at the end
};

PropagationResult exact_propagation(const IsingProblem& p,
                                    const AnnealCoefficients& ac,
                                    const OptimizedSchedule& schedule,
                                    double dt);

std::string apt_result_to_json(const AptResult& r);

}  // namespace nqdt
