// Copyright 2026 The nqdt Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nqdt/anneal.hpp"
#include "nqdt/ising.hpp"
#include "nqdt/sweep.hpp"

namespace nqdt {

// The adiabatic control function
//
//   Lambda(s) = |<psi0| dH/ds |psi1>| / |(E1 - E0) * E0|
//
// sampled on the sweep grid. Large Lambda marks where the anneal must slow
// down; the pace rule is ds/dt proportional to 1/Lambda.
struct ControlSample {
  double s = 0.0;
  double matrix_element = 0.0;  // |<psi0| dH/ds |psi1>|
  double gap = 0.0;
  double e0 = 0.0;
  double lambda = 0.0;
  bool guarded = false;  // denominator underflowed; lambda was patched
};

// Scalar row for file-based control data: s, both energies, and the
// matrix element magnitude.
struct ControlRow {
  double s = 0.0;
  double e0 = 0.0;
  double e1 = 0.0;
  double matrix_element = 0.0;
};

// From trained sweep records (states available, matrix elements computed
// here) or from precomputed rows. Denominators below 1e-9 are guarded: the
// sample is flagged and its lambda patched to the largest finite sample.
// Throws singularity_error when every sample is guarded.
std::vector<ControlSample> control_function(
    const std::vector<SpectralRecord>& records, const IsingProblem& p,
    const AnnealCoefficients& ac);
std::vector<ControlSample> control_function(const std::vector<ControlRow>& rows);

// t(s) from pacing ds/dt = c * Lambda(s_ref)/Lambda(s), trapezoid-integrated
// on the sample grid and scaled so t(1) = total_time. s_ref picks the grid
// sample nearest the requested reference point.
struct ScheduleTable {
  std::vector<double> t;
  std::vector<double> s;
};

ScheduleTable integrate_schedule(const std::vector<ControlSample>& samples,
                                 double total_time, double s_ref);

// Hardware-ready schedule: few linear pieces, bounded slew rate.
struct OptimizedSchedule {
  std::vector<std::pair<double, double>> points;  // (t, s), endpoints pinned
  double total_time = 0.0;
  std::vector<std::string> flags;
};

// Inverts t(s) to s(t), resamples to at most max_points knots equally
// spaced in t (endpoints exact), optionally rescales the time axis to
// target_total, then stretches total time just enough when any |ds/dt|
// exceeds slope_limit, flagging both adjustments.
OptimizedSchedule invert_and_resample(const ScheduleTable& table,
                                      int max_points, double slope_limit,
                                      std::optional<double> target_total);

double max_slope(const OptimizedSchedule& schedule);

// Schedule files: JSON {"total_time", "points": [[t, s], ...], "flags"} and
// CSV with header t,s.
std::string schedule_to_json(const OptimizedSchedule& schedule);
OptimizedSchedule schedule_from_json(const std::string& text);
OptimizedSchedule load_schedule(const std::string& path);
void save_schedule(const OptimizedSchedule& schedule, const std::string& path);
void write_schedule_csv(const OptimizedSchedule& schedule,
                        const std::string& path);

// Control CSV: header s,E0,E1,me at %.10g.
void write_control_csv(const std::vector<ControlSample>& samples,
                       const std::string& path);
std::vector<ControlRow> read_control_csv(const std::string& path);

}  // namespace nqdt
