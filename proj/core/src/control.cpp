// Copyright 2026 The nqdt Authors
// SPDX-License-Identifier: Apache-2.0

#include "nqdt/control.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <string>

#include "nqdt/errors.hpp"
#include "nqdt/operator.hpp"

namespace nqdt {

namespace {

using nlohmann::json;

// Denominators |gap * E0| below this are treated as singular samples.
constexpr double kDenominatorFloor = 1e-9;

std::string csv_num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

// Shared tail of both control_function overloads: fills lambda from the
// matrix element and denominator, patching singular samples to the largest
// finite lambda so the pacing rule stays usable across isolated crossings.
std::vector<ControlSample> finish_lambdas(std::vector<ControlSample> samples) {
  if (samples.size() < 2) {
    throw input_error("control function needs at least 2 samples");
  }
  for (std::size_t i = 1; i < samples.size(); ++i) {
    if (!(samples[i - 1].s < samples[i].s)) {
      throw input_error("control samples must have strictly increasing s");
    }
  }

  double largest = 0.0;
  bool any_finite = false;
  for (ControlSample& cs : samples) {
    const double den = std::abs(cs.gap * cs.e0);
    if (den < kDenominatorFloor) {
      cs.guarded = true;
      continue;
    }
    cs.lambda = cs.matrix_element / den;
    any_finite = true;
    largest = std::max(largest, cs.lambda);
  }
  if (!any_finite) {
    throw singularity_error(
        "control function undefined: every sample has |gap * E0| below " +
        std::to_string(kDenominatorFloor));
  }
  for (ControlSample& cs : samples) {
    if (cs.guarded) cs.lambda = largest;
  }
  return samples;
}

}  // namespace

std::vector<ControlSample> control_function(
    const std::vector<SpectralRecord>& records, const IsingProblem& p,
    const AnnealCoefficients& ac) {
  std::vector<ControlSample> samples;
  samples.reserve(records.size());
  for (const SpectralRecord& r : records) {
    if (r.psi0.size() == 0 || r.psi1.size() == 0) {
      throw input_error("sweep record at s = " + std::to_string(r.s) +
                        " carries no states");
    }
    const HamiltonianOperator dh = d_operator_ds(p, ac, r.s);
    ControlSample cs;
    cs.s = r.s;
    cs.matrix_element = std::abs(r.psi0.dot(dh.apply(r.psi1)));
    cs.gap = r.e1 - r.e0;
    cs.e0 = r.e0;
    samples.push_back(cs);
  }
  return finish_lambdas(std::move(samples));
}

std::vector<ControlSample> control_function(const std::vector<ControlRow>& rows) {
  std::vector<ControlSample> samples;
  samples.reserve(rows.size());
  for (const ControlRow& r : rows) {
    ControlSample cs;
    cs.s = r.s;
    cs.matrix_element = std::abs(r.matrix_element);
    cs.gap = r.e1 - r.e0;
    cs.e0 = r.e0;
    samples.push_back(cs);
  }
  return finish_lambdas(std::move(samples));
}

ScheduleTable integrate_schedule(const std::vector<ControlSample>& samples,
                                 double total_time, double s_ref) {
  if (samples.size() < 2) {
    throw input_error("schedule integration needs at least 2 samples");
  }
  if (!(total_time > 0.0) || !std::isfinite(total_time)) {
    throw input_error("total time must be positive and finite");
  }
  if (!(s_ref >= 0.0 && s_ref <= 1.0)) {
    throw input_error("reference point outside [0, 1]");
  }

  std::size_t ref = 0;
  for (std::size_t i = 1; i < samples.size(); ++i) {
    if (std::abs(samples[i].s - s_ref) < std::abs(samples[ref].s - s_ref)) {
      ref = i;
    }
  }
  const double lambda_ref = samples[ref].lambda;
  if (!(lambda_ref > 0.0)) {
    throw singularity_error("control function vanishes at the reference point s = " +
                            std::to_string(samples[ref].s));
  }

  // dt = T * Lambda(s)/Lambda(s_ref) ds, accumulated with the trapezoid rule
  // on the sample grid.
  ScheduleTable table;
  table.t.resize(samples.size());
  table.s.resize(samples.size());
  table.t[0] = 0.0;
  table.s[0] = samples[0].s;
  for (std::size_t i = 1; i < samples.size(); ++i) {
    const double ds = samples[i].s - samples[i - 1].s;
    const double pace =
        0.5 * (samples[i].lambda + samples[i - 1].lambda) / lambda_ref;
    table.t[i] = table.t[i - 1] + total_time * pace * ds;
    table.s[i] = samples[i].s;
  }
  return table;
}

OptimizedSchedule invert_and_resample(const ScheduleTable& table,
                                      int max_points, double slope_limit,
                                      std::optional<double> target_total) {
  if (table.t.size() != table.s.size() || table.t.size() < 2) {
    throw input_error("schedule table needs matching t and s with >= 2 rows");
  }
  for (std::size_t i = 1; i < table.t.size(); ++i) {
    if (!(table.t[i - 1] < table.t[i])) {
      throw input_error(
          "schedule time must be strictly increasing; the control function "
          "vanishes on an interval");
    }
  }
  if (max_points < 2) throw input_error("resampling needs at least 2 points");
  if (!(slope_limit > 0.0)) throw input_error("slope limit must be positive");
  if (target_total && (!(*target_total > 0.0) || !std::isfinite(*target_total))) {
    throw input_error("target total time must be positive and finite");
  }

  const double t0 = table.t.front();
  const double raw_total = table.t.back() - t0;

  // s(t) by piecewise-linear inversion of the monotone table, sampled at
  // equally spaced times with both endpoints taken exactly.
  OptimizedSchedule sched;
  sched.points.reserve(static_cast<std::size_t>(max_points));
  for (int j = 0; j < max_points; ++j) {
    if (j == 0) {
      sched.points.emplace_back(0.0, table.s.front());
      continue;
    }
    if (j == max_points - 1) {
      sched.points.emplace_back(raw_total, table.s.back());
      continue;
    }
    const double tq = t0 + raw_total * static_cast<double>(j) /
                               static_cast<double>(max_points - 1);
    const auto it = std::upper_bound(table.t.begin(), table.t.end(), tq);
    const std::size_t hi =
        std::min<std::size_t>(static_cast<std::size_t>(it - table.t.begin()),
                              table.t.size() - 1);
    const std::size_t lo = hi - 1;
    const double w = (tq - table.t[lo]) / (table.t[hi] - table.t[lo]);
    sched.points.emplace_back(tq - t0,
                              table.s[lo] + w * (table.s[hi] - table.s[lo]));
  }
  sched.total_time = raw_total;

  if (target_total) {
    const double factor = *target_total / raw_total;
    for (auto& [t, s] : sched.points) t *= factor;
    sched.total_time = *target_total;
  }

  const double worst = max_slope(sched);
  if (worst > slope_limit * (1.0 + 1e-12)) {
    const double stretch = worst / slope_limit;
    for (auto& [t, s] : sched.points) t *= stretch;
    sched.total_time *= stretch;
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "slope limit %.6g exceeded (max |ds/dt| = %.6g); total time "
                  "stretched by %.6g",
                  slope_limit, worst, stretch);
    sched.flags.push_back(buf);
  }
  return sched;
}

double max_slope(const OptimizedSchedule& schedule) {
  if (schedule.points.size() < 2) {
    throw input_error("schedule needs at least 2 points");
  }
  double worst = 0.0;
  for (std::size_t i = 1; i < schedule.points.size(); ++i) {
    const double dt = schedule.points[i].first - schedule.points[i - 1].first;
    const double ds = schedule.points[i].second - schedule.points[i - 1].second;
    if (!(dt > 0.0)) throw input_error("schedule times must strictly increase");
    worst = std::max(worst, std::abs(ds / dt));
  }
  return worst;
}

std::string schedule_to_json(const OptimizedSchedule& schedule) {
  json j;
  j["total_time"] = schedule.total_time;
  json pts = json::array();
  for (const auto& [t, s] : schedule.points) {
    pts.push_back(json::array({t, s}));
  }
  j["points"] = pts;
  j["flags"] = schedule.flags;
  return j.dump(2) + "\n";
}

OptimizedSchedule schedule_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw input_error(std::string("schedule JSON: ") + e.what());
  }
  OptimizedSchedule sched;
  try {
    sched.total_time = j.at("total_time").get<double>();
    for (const auto& entry : j.at("points")) {
      if (!entry.is_array() || entry.size() != 2) {
        throw input_error("schedule points must be [t, s] pairs");
      }
      sched.points.emplace_back(entry[0].get<double>(), entry[1].get<double>());
    }
    if (j.contains("flags")) {
      sched.flags = j.at("flags").get<std::vector<std::string>>();
    }
  } catch (const json::exception& e) {
    throw input_error(std::string("schedule JSON: ") + e.what());
  }

  if (sched.points.size() < 2) {
    throw input_error("schedule needs at least 2 points");
  }
  for (std::size_t i = 0; i < sched.points.size(); ++i) {
    const auto& [t, s] = sched.points[i];
    if (!std::isfinite(t) || !std::isfinite(s)) {
      throw input_error("non-finite schedule point");
    }
    if (s < 0.0 || s > 1.0) {
      throw input_error("schedule s = " + std::to_string(s) + " outside [0, 1]");
    }
    if (i > 0 && !(sched.points[i - 1].first < t)) {
      throw input_error("schedule times must strictly increase");
    }
  }
  const double span = sched.points.back().first - sched.points.front().first;
  if (std::abs(sched.total_time - span) > 1e-9 * std::max(1.0, span)) {
    throw input_error("schedule total_time disagrees with its points");
  }
  return sched;
}

OptimizedSchedule load_schedule(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw input_error("cannot open schedule file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return schedule_from_json(buf.str());
}

void save_schedule(const OptimizedSchedule& schedule, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw input_error("cannot write schedule file: " + path);
  out << schedule_to_json(schedule);
}

void write_schedule_csv(const OptimizedSchedule& schedule,
                        const std::string& path) {
  std::ofstream out(path);
  if (!out) throw input_error("cannot write schedule CSV: " + path);
  out << "t,s\n";
  for (const auto& [t, s] : schedule.points) {
    out << csv_num(t) << ',' << csv_num(s) << '\n';
  }
}

void write_control_csv(const std::vector<ControlSample>& samples,
                       const std::string& path) {
  std::ofstream out(path);
  if (!out) throw input_error("cannot write control CSV: " + path);
  out << "s,E0,E1,me\n";
  for (const ControlSample& cs : samples) {
    out << csv_num(cs.s) << ',' << csv_num(cs.e0) << ','
        << csv_num(cs.e0 + cs.gap) << ',' << csv_num(cs.matrix_element) << '\n';
  }
}

std::vector<ControlRow> read_control_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw input_error("cannot open control CSV: " + path);
  std::string line;
  if (!std::getline(in, line) || line.rfind("s,E0,E1,me", 0) != 0) {
    throw input_error("control CSV header mismatch: " + path);
  }
  std::vector<ControlRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    ControlRow r;
    char trailing = '\0';
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf%c", &r.s, &r.e0, &r.e1,
                    &r.matrix_element, &trailing) < 4) {
      throw input_error(path + ":" + std::to_string(line_no) +
                        ": expected four comma-separated numbers");
    }
    rows.push_back(r);
  }
  return rows;
}

}  // namespace nqdt
