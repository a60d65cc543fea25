// Copyright 2026 The nqdt Authors
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include "nqdt/anneal.hpp"
#include "nqdt/ansatz.hpp"
#include "nqdt/ising.hpp"
#include "nqdt/operator.hpp"
#include "nqdt/training.hpp"

namespace {

void BM_EnergyExpectation(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const nqdt::IsingProblem p = nqdt::random_instance(n, 3);
  const nqdt::HamiltonianOperator op =
      nqdt::build_operator(p, nqdt::AnnealCoefficients::parametric(), 0.5);
  const nqdt::WavefunctionAnsatz a = nqdt::WavefunctionAnsatz::init(n, 64, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(nqdt::energy_expectation(a, op));
  }
}
BENCHMARK(BM_EnergyExpectation)->DenseRange(4, 10, 2);

void BM_Gradient(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const nqdt::IsingProblem p = nqdt::random_instance(n, 3);
  const nqdt::HamiltonianOperator op =
      nqdt::build_operator(p, nqdt::AnnealCoefficients::parametric(), 0.5);
  const nqdt::WavefunctionAnsatz a = nqdt::WavefunctionAnsatz::init(n, 64, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(nqdt::gradient(a, op));
  }
  state.SetItemsProcessed(state.iterations() * a.parameter_count());
}
BENCHMARK(BM_Gradient)->DenseRange(4, 10, 2);

void BM_TrainGroundEpochs(benchmark::State& state) {
  // Cost of a fixed 200-epoch descent, the unit the sweep budget is made of.
  const int n = static_cast<int>(state.range(0));
  const nqdt::IsingProblem p = nqdt::random_instance(n, 3);
  const nqdt::HamiltonianOperator op =
      nqdt::build_operator(p, nqdt::AnnealCoefficients::parametric(), 0.5);
  nqdt::TrainingConfig cfg;
  cfg.max_epochs = 200;
  cfg.window = 200;
  cfg.tol = 1e-300;
  for (auto _ : state) {
    const nqdt::TrainResult res =
        nqdt::train_ground(op, nqdt::WavefunctionAnsatz::init(n, 64, 1), cfg);
    benchmark::DoNotOptimize(res.report.final_energy);
  }
  state.SetItemsProcessed(state.iterations() * 200);
}
BENCHMARK(BM_TrainGroundEpochs)->DenseRange(4, 8, 2)->Unit(benchmark::kMillisecond);

}  // namespace
