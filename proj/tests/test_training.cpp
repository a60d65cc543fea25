// Copyright 2026 The nqdt Authors
// SPDX-License-Identifier: Apache-2.0

#include "nqdt/training.hpp"

#include <cmath>
#include <nlohmann/json.hpp>
#include <numeric>

#include "doctest.h"
#include "helpers.hpp"
#include "nqdt/anneal.hpp"
#include "nqdt/errors.hpp"
#include "nqdt/exact.hpp"
#include "nqdt/ising.hpp"

using namespace nqdt;

namespace {

StateVector state_from(const Eigen::VectorXd& amps) {
  return StateVector{amps, amps.squaredNorm()};
}

TrainingConfig quick_config() {
  TrainingConfig cfg;
  cfg.window = 50;
  cfg.tol = 1e-4;
  cfg.max_epochs = 20000;
  return cfg;
}

}  // namespace

TEST_CASE("local_energy of an exact eigenvector is the eigenvalue everywhere") {
  const IsingProblem p = random_instance(3, 41);
  const AnnealCoefficients ac = AnnealCoefficients::parametric();
  const HamiltonianOperator op = build_operator(p, ac, 0.6);
  const Spectrum sp = exact_spectrum(op, 2);

  for (int k : {0, 1}) {
    const StateVector sv = state_from(sp.eigenvectors.col(k));
    for (std::uint64_t x = 0; x < 8; ++x) {
      if (std::abs(sv.amps[static_cast<Eigen::Index>(x)]) < 1e-10) continue;
      CHECK(local_energy(sv, x, op) ==
            doctest::Approx(sp.eigenvalues[k]).epsilon(1e-9));
    }
  }
}

TEST_CASE("local_energy on the uniform state at s = 0 is -n A / 2") {
  const IsingProblem p = tfim_instance(3);
  const AnnealCoefficients ac = AnnealCoefficients::parametric();
  const HamiltonianOperator op = build_operator(p, ac, 0.0);
  const StateVector uniform = state_from(Eigen::VectorXd::Ones(8));
  const double expect = -3.0 * ac.at(0.0).a / 2.0;
  for (std::uint64_t x = 0; x < 8; ++x) {
    CHECK(local_energy(uniform, x, op) == doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("local_energy guards the division by zero amplitude") {
  const IsingProblem p = tfim_instance(2);
  const AnnealCoefficients ac = AnnealCoefficients::parametric();
  const HamiltonianOperator op = build_operator(p, ac, 0.5);
  Eigen::VectorXd amps = Eigen::VectorXd::Ones(4);
  amps[2] = 0.0;
  CHECK_THROWS_AS(local_energy(state_from(amps), 2, op), input_error);
  CHECK_NOTHROW(local_energy(state_from(amps), 1, op));
}

TEST_CASE("energy expectation agrees with the quadratic form") {
  const AnnealCoefficients ac = AnnealCoefficients::parametric();
  for (std::uint64_t seed : {3ULL, 14ULL, 15ULL}) {
    const IsingProblem p = random_instance(4, seed);
    const HamiltonianOperator op = build_operator(p, ac, 0.35);

    // Two independent routes: Born-weighted local energies vs v'Hv / v'v.
    const Eigen::VectorXd v = nqdt_test::random_vector(op.dim(), seed + 50);
    const StateVector sv = state_from(v);
    const double via_local = energy_expectation(sv, op);
    const double via_quad = op.quadratic_form(v) / v.squaredNorm();
    CHECK(via_local == doctest::Approx(via_quad).epsilon(1e-10));

    const WavefunctionAnsatz a = WavefunctionAnsatz::init(4, 16, seed);
    const StateVector net = full_state(a);
    CHECK(energy_expectation(a, op) ==
          doctest::Approx(op.quadratic_form(net.amps) / net.norm_sq)
              .epsilon(1e-10));
  }
}

TEST_CASE("energy expectation of exact eigenvectors returns eigenvalues") {
  const IsingProblem p = random_instance(3, 77);
  const AnnealCoefficients ac = AnnealCoefficients::parametric();
  const HamiltonianOperator op = build_operator(p, ac, 0.8);
  const Spectrum sp = exact_spectrum(op, 3);
  for (int k = 0; k < 3; ++k) {
    CHECK(energy_expectation(state_from(sp.eigenvectors.col(k)), op) ==
          doctest::Approx(sp.eigenvalues[k]).epsilon(1e-11));
  }
}

TEST_CASE("analytic gradient matches central finite differences") {
  const AnnealCoefficients ac = AnnealCoefficients::parametric();
  const IsingProblem p = random_instance(3, 6);
  for (double s : {0.0, 0.4, 1.0}) {
    const HamiltonianOperator op = build_operator(p, ac, s);
    WavefunctionAnsatz a = WavefunctionAnsatz::init(3, 8, 5);
    const Eigen::VectorXd g = gradient(a, op);
    const Eigen::VectorXd theta = a.parameters();
    REQUIRE(g.size() == theta.size());

    const double step = 1e-5;
    for (Eigen::Index i = 0; i < theta.size(); ++i) {
      Eigen::VectorXd t = theta;
      t[i] = theta[i] + step;
      a.set_parameters(t);
      const double hi = energy_expectation(a, op);
      t[i] = theta[i] - step;
      a.set_parameters(t);
      const double lo = energy_expectation(a, op);
      const double fd = (hi - lo) / (2 * step);
      CHECK(std::abs(g[i] - fd) <= std::max(1e-6, 1e-4 * std::abs(g[i])));
    }
    a.set_parameters(theta);
  }
}

TEST_CASE("stop_check thresholds the trailing-window deviation strictly") {
  std::vector<double> trace;
  for (int i = 0; i < 10; ++i) trace.push_back(static_cast<double>(i % 3));

  // Population std of the last 6 entries, computed here independently.
  const int window = 6;
  const double mean =
      std::accumulate(trace.end() - window, trace.end(), 0.0) / window;
  double var = 0.0;
  for (auto it = trace.end() - window; it != trace.end(); ++it) {
    var += (*it - mean) * (*it - mean);
  }
  const double sigma = std::sqrt(var / window);

  CHECK_FALSE(stop_check(trace, window, sigma));  // strict <
  CHECK(stop_check(trace, window, std::nextafter(sigma, 1e300)));

  CHECK_FALSE(stop_check({1.0, 1.0}, 3, 1.0));  // too short
  CHECK(stop_check({5.0, 5.0, 5.0}, 3, 1e-15));
  CHECK_THROWS_AS(stop_check(trace, 0, 1.0), input_error);
}

TEST_CASE("train_ground reaches the ground state of a 2-spin chain") {
  const IsingProblem p = tfim_instance(2);
  const AnnealCoefficients ac = AnnealCoefficients::parametric();
  const HamiltonianOperator op = build_operator(p, ac, 0.5);
  const Spectrum sp = exact_spectrum(op, 1);

  const TrainingConfig cfg = quick_config();
  const WavefunctionAnsatz start = WavefunctionAnsatz::init(2, 16, 3);
  const TrainResult res = train_ground(op, start, cfg);

  CHECK(res.report.converged);
  CHECK(res.report.stop_reason == StopReason::variance);
  CHECK(res.report.epochs_run ==
        static_cast<int>(res.report.energy_trace.size()));
  CHECK(res.report.final_energy == res.report.energy_trace.back());

  // Returned parameters reproduce the reported energy.
  CHECK(energy_expectation(res.ansatz, op) ==
        doctest::Approx(res.report.final_energy).epsilon(1e-9));

  // Variational bound and accuracy against the dense reference.
  CHECK(res.report.final_energy >= sp.eigenvalues[0] - 1e-9);
  CHECK(relative_error(res.report.final_energy, sp.eigenvalues[0]) < 0.01);
}

TEST_CASE("training epochs are capped and reported") {
  const IsingProblem p = tfim_instance(2);
  const AnnealCoefficients ac = AnnealCoefficients::parametric();
  const HamiltonianOperator op = build_operator(p, ac, 0.5);

  TrainingConfig cfg;
  cfg.max_epochs = 7;
  cfg.window = 2;
  cfg.tol = 1e-300;  // unreachable
  const TrainResult res =
      train_ground(op, WavefunctionAnsatz::init(2, 4, 1), cfg);
  CHECK_FALSE(res.report.converged);
  CHECK(res.report.stop_reason == StopReason::max_epochs);
  CHECK(res.report.epochs_run == 7);
  CHECK(res.report.energy_trace.size() == 7);
}

TEST_CASE("first RMSprop update follows the v = 0.1 g^2 bootstrap") {
  const IsingProblem p = tfim_instance(2);
  const AnnealCoefficients ac = AnnealCoefficients::parametric();
  const HamiltonianOperator op = build_operator(p, ac, 0.3);
  const WavefunctionAnsatz start = WavefunctionAnsatz::init(2, 4, 11);

  TrainingConfig cfg;
  cfg.max_epochs = 2;  // one update sandwiched between two evaluations
  cfg.window = 100;
  const TrainResult res = train_ground(op, start, cfg);

  // After one gradient step v = (1 - decay) g^2, so the update is fully
  // determined by the initial gradient.
  const Eigen::VectorXd g = gradient(start, op);
  const Eigen::VectorXd exact_step =
      (start.parameters().array() -
       cfg.learning_rate * g.array() /
           (((1.0 - cfg.rms_decay) * g.array().square()).sqrt() +
            cfg.rms_epsilon))
          .matrix();
  CHECK((res.ansatz.parameters() - exact_step).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("brauer training reaches the first excited state") {
  const IsingProblem p = random_instance(2, 19);
  const AnnealCoefficients ac = AnnealCoefficients::parametric();
  const HamiltonianOperator op = build_operator(p, ac, 0.5);
  const Spectrum sp = exact_spectrum(op, 2);

  const StateVector psi0 = state_from(sp.eigenvectors.col(0));
  // Twice the gap always clears the promotion threshold.
  const double delta = 2.0 * (sp.eigenvalues[1] - sp.eigenvalues[0]);
  const TrainResult res = train_excited_brauer(
      op, psi0, WavefunctionAnsatz::init(2, 16, 4), quick_config(), delta);

  CHECK(res.report.converged);
  CHECK(res.report.warnings.empty());
  CHECK(relative_error(res.report.final_energy, sp.eigenvalues[1]) < 0.02);
}

TEST_CASE("promotion guard fires when the shift cannot reach E1") {
  // diag(-3, 1) with psi0 = e0 and delta = 3 shifts the spectrum to {0, 1}:
  // the shifted ground state (0) is not the first excited level (1).
  Eigen::VectorXd diag(2);
  diag << -3.0, 1.0;
  const HamiltonianOperator op(1, diag, 0.0);
  Eigen::VectorXd e0(2);
  e0 << 1.0, 0.0;

  TrainingConfig cfg;
  cfg.max_epochs = 50;
  cfg.window = 5;
  cfg.tol = 1e-3;
  const TrainResult res = train_excited_brauer(
      op, state_from(e0), WavefunctionAnsatz::init(1, 4, 2), cfg, 3.0);
  REQUIRE_FALSE(res.report.warnings.empty());
  CHECK(res.report.warnings.front().find("promote") != std::string::npos);

  // A sufficient shift clears the guard.
  const TrainResult ok = train_excited_brauer(
      op, state_from(e0), WavefunctionAnsatz::init(1, 4, 2), cfg, 5.0);
  CHECK(ok.report.warnings.empty());
}

TEST_CASE("penalty loss equals the Rayleigh quotient of the augmented operator") {
  const IsingProblem p = random_instance(3, 33);
  const AnnealCoefficients ac = AnnealCoefficients::parametric();
  const HamiltonianOperator op = build_operator(p, ac, 0.4);
  const Spectrum sp = exact_spectrum(op, 1);
  const StateVector psi0 = state_from(sp.eigenvectors.col(0));
  const double lambda = 250.0;

  HamiltonianOperator augmented = op;
  augmented.add_rank_one(lambda, psi0.amps / psi0.amps.norm());

  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Eigen::VectorXd v = nqdt_test::random_vector(op.dim(), 900 + seed);
    const StateVector sv = state_from(v);
    const double penalised =
        energy_expectation(sv, op) +
        lambda * orthogonality_measure(sv, {psi0});
    CHECK(energy_expectation(sv, augmented) ==
          doctest::Approx(penalised).epsilon(1e-10));
  }
}

TEST_CASE("penalty training reports physical energy and low residual overlap") {
  // Instance 5 keeps E1 well separated from both E0 and E2 at this point of
  // the schedule, so the descent lands on the first excited level instead of
  // a nearby stationary state.
  const IsingProblem p = random_instance(2, 5);
  const AnnealCoefficients ac = AnnealCoefficients::parametric();
  const HamiltonianOperator op = build_operator(p, ac, 0.6);
  const Spectrum sp = exact_spectrum(op, 2);
  const StateVector psi0 = state_from(sp.eigenvectors.col(0));

  TrainingConfig cfg = quick_config();
  const TrainResult res = train_excited_penalty(
      op, {psi0}, {100.0}, WavefunctionAnsatz::init(2, 16, 8), cfg);

  CHECK(res.report.converged);
  CHECK(res.report.stop_reason == StopReason::orthogonality_variance);
  CHECK(res.report.final_orthogonality ==
        doctest::Approx(orthogonality_measure(full_state(res.ansatz), {psi0}))
            .epsilon(1e-12));
  CHECK(res.report.final_orthogonality < cfg.ortho_tol);

  // The trace tracks the energy against the original operator, not the
  // penalty-augmented one.
  CHECK(res.report.final_energy ==
        doctest::Approx(energy_expectation(res.ansatz, op)).epsilon(1e-8));
  CHECK(relative_error(res.report.final_energy, sp.eigenvalues[1]) < 0.02);
}

TEST_CASE("orthogonality_measure on hand states") {
  Eigen::VectorXd a(2), b(2);
  a << 1.0, 0.0;
  b << 0.0, 2.0;
  CHECK(orthogonality_measure(state_from(a), {state_from(b)}) ==
        doctest::Approx(0.0));
  CHECK(orthogonality_measure(state_from(a), {state_from(a)}) ==
        doctest::Approx(1.0));
  Eigen::VectorXd c(2);
  c << 1.0, 1.0;
  CHECK(orthogonality_measure(state_from(c), {state_from(a)}) ==
        doctest::Approx(0.5));
  CHECK(orthogonality_measure(state_from(c),
                              {state_from(a), state_from(b)}) ==
        doctest::Approx(1.0));
}

TEST_CASE("penalty training validates its inputs") {
  const IsingProblem p = tfim_instance(2);
  const AnnealCoefficients ac = AnnealCoefficients::parametric();
  const HamiltonianOperator op = build_operator(p, ac, 0.5);
  const WavefunctionAnsatz start = WavefunctionAnsatz::init(2, 4, 0);
  const StateVector psi0 = state_from(Eigen::VectorXd::Ones(4));

  CHECK_THROWS_AS(train_excited_penalty(op, {}, {}, start, {}), input_error);
  CHECK_THROWS_AS(train_excited_penalty(op, {psi0}, {1.0, 2.0}, start, {}),
                  input_error);
  CHECK_THROWS_AS(train_excited_penalty(op, {psi0}, {-1.0}, start, {}),
                  input_error);
}

TEST_CASE("training config is validated") {
  const IsingProblem p = tfim_instance(2);
  const AnnealCoefficients ac = AnnealCoefficients::parametric();
  const HamiltonianOperator op = build_operator(p, ac, 0.5);
  const WavefunctionAnsatz start = WavefunctionAnsatz::init(2, 4, 0);

  TrainingConfig cfg;
  cfg.learning_rate = -1.0;
  CHECK_THROWS_AS(train_ground(op, start, cfg), input_error);
  cfg = {};
  cfg.window = 1;
  CHECK_THROWS_AS(train_ground(op, start, cfg), input_error);
  cfg = {};
  cfg.rms_decay = 1.0;
  CHECK_THROWS_AS(train_ground(op, start, cfg), input_error);
}

TEST_CASE("report JSON carries the summary fields") {
  TrainingReport rep;
  rep.final_energy = -1.5;
  rep.epochs_run = 3;
  rep.energy_trace = {-1.0, -1.4, -1.5};
  rep.converged = true;
  rep.stop_reason = StopReason::variance;
  rep.warnings = {"w"};

  const auto j = nlohmann::json::parse(report_to_json(rep, 2));
  CHECK(j.at("final_energy").get<double>() == doctest::Approx(-1.5));
  CHECK(j.at("epochs_run").get<int>() == 3);
  CHECK(j.at("converged").get<bool>());
  CHECK(j.at("stop_reason").get<std::string>() == "variance");
  CHECK_FALSE(j.contains("final_orthogonality"));
  const auto trace = j.at("energy_trace").get<std::vector<double>>();
  // Stride 2 keeps entries 0 and 2; entry 2 is already the last.
  CHECK(trace == std::vector<double>{-1.0, -1.5});
}
