// Copyright 2026 The nqdt Authors
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include <Eigen/Dense>

#include "nqdt/anneal.hpp"
#include "nqdt/exact.hpp"
#include "nqdt/ising.hpp"
#include "nqdt/operator.hpp"

namespace {

nqdt::HamiltonianOperator make_operator(int n) {
  const nqdt::IsingProblem p = nqdt::random_instance(n, 7);
  return nqdt::build_operator(p, nqdt::AnnealCoefficients::parametric(), 0.5);
}

void BM_Apply(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const nqdt::HamiltonianOperator op = make_operator(n);
  Eigen::VectorXd v = Eigen::VectorXd::Random(op.dim());
  Eigen::VectorXd out(op.dim());
  for (auto _ : state) {
    op.apply(v, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * op.dim());
}
BENCHMARK(BM_Apply)->DenseRange(6, 14, 2);

void BM_QuadraticForm(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const nqdt::HamiltonianOperator op = make_operator(n);
  Eigen::VectorXd v = Eigen::VectorXd::Random(op.dim());
  for (auto _ : state) {
    benchmark::DoNotOptimize(op.quadratic_form(v));
  }
}
BENCHMARK(BM_QuadraticForm)->DenseRange(6, 14, 2);

void BM_IsingEnergyTable(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const nqdt::IsingProblem p = nqdt::random_instance(n, 7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(nqdt::ising_energy_table(p));
  }
}
BENCHMARK(BM_IsingEnergyTable)->DenseRange(6, 14, 2);

void BM_ExactSpectrum(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const nqdt::HamiltonianOperator op = make_operator(n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(nqdt::exact_spectrum(op, 2));
  }
}
BENCHMARK(BM_ExactSpectrum)->DenseRange(4, 10, 2);

}  // namespace
