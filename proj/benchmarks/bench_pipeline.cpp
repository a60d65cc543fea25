// Copyright 2026 The nqdt Authors
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include <vector>

#include "nqdt/anneal.hpp"
#include "nqdt/apt.hpp"
#include "nqdt/control.hpp"
#include "nqdt/ising.hpp"

namespace {

nqdt::OptimizedSchedule linear_schedule(double total) {
  nqdt::OptimizedSchedule sched;
  sched.points = {{0.0, 0.0}, {total, 1.0}};
  sched.total_time = total;
  return sched;
}

void BM_AptTransition(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const nqdt::IsingProblem p = nqdt::random_instance(n, 11);
  const nqdt::AnnealCoefficients ac = nqdt::AnnealCoefficients::parametric();
  const nqdt::OptimizedSchedule sched = linear_schedule(10.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(nqdt::apt_transition(p, ac, sched, 1, 64));
  }
}
BENCHMARK(BM_AptTransition)->DenseRange(2, 6, 2)->Unit(benchmark::kMillisecond);

void BM_ExactPropagation(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const nqdt::IsingProblem p = nqdt::random_instance(n, 11);
  const nqdt::AnnealCoefficients ac = nqdt::AnnealCoefficients::parametric();
  const nqdt::OptimizedSchedule sched = linear_schedule(10.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(nqdt::exact_propagation(p, ac, sched, 0.01));
  }
}
BENCHMARK(BM_ExactPropagation)->DenseRange(2, 6, 2)->Unit(benchmark::kMillisecond);

void BM_ScheduleSynthesis(benchmark::State& state) {
  // Control table the size of a default 21-point sweep.
  std::vector<nqdt::ControlRow> rows;
  for (int i = 0; i < 21; ++i) {
    const double s = i / 20.0;
    rows.push_back({s, -2.0 - s, -1.0 - 0.5 * s, 0.5 + s * (1.0 - s)});
  }
  for (auto _ : state) {
    const auto samples = nqdt::control_function(rows);
    const auto table = nqdt::integrate_schedule(samples, 1.0, 0.0);
    benchmark::DoNotOptimize(nqdt::invert_and_resample(table, 12, 2.0, {}));
  }
}
BENCHMARK(BM_ScheduleSynthesis);

}  // namespace
