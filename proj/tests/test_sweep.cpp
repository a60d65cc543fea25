// Copyright 2026 The nqdt Authors
// SPDX-License-Identifier: Apache-2.0

#include "nqdt/sweep.hpp"

#include <cmath>
#include <cstdio>
#include <string>

#include "doctest.h"
#include "nqdt/errors.hpp"
#include "nqdt/exact.hpp"
#include "nqdt/operator.hpp"

using namespace nqdt;

namespace {

SweepConfig small_sweep_config() {
  SweepConfig cfg;
  cfg.grid_steps = 5;
  cfg.hidden = 16;
  cfg.training.window = 50;
  cfg.training.tol = 1e-4;
  cfg.training.max_epochs = 20000;
  return cfg;
}

struct TempPath {
  std::string path;
  explicit TempPath(const std::string& name) : path("/tmp/nqdt_test_" + name) {}
  ~TempPath() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("a small chain sweep tracks the dense reference closely") {
  const IsingProblem p = tfim_instance(2);
  const AnnealCoefficients ac = AnnealCoefficients::parametric();
  const SweepConfig cfg = small_sweep_config();
  const auto records = run_sweep(p, ac, cfg, 21);

  REQUIRE(records.size() == 5);
  for (std::size_t i = 0; i < records.size(); ++i) {
    const SpectralRecord& r = records[i];
    CHECK(r.s == doctest::Approx(0.25 * static_cast<double>(i)).epsilon(1e-14));
    CHECK(r.gap == doctest::Approx(r.e1 - r.e0).epsilon(1e-12));
    CHECK(r.psi0.squaredNorm() == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(r.psi1.squaredNorm() == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(r.epochs0 > 0);
    CHECK(r.epochs1 > 0);

    REQUIRE(r.e0_ed.has_value());
    REQUIRE(r.e1_ed.has_value());
    REQUIRE(r.relerr0.has_value());
    REQUIRE(r.relerr1.has_value());
    CHECK(*r.relerr0 ==
          doctest::Approx(100.0 * relative_error(r.e0, *r.e0_ed)).epsilon(1e-12));
    CHECK(*r.relerr1 ==
          doctest::Approx(100.0 * relative_error(r.e1, *r.e1_ed)).epsilon(1e-12));
    CHECK(*r.relerr0 < 1.0);
    CHECK(*r.relerr1 < 2.0);

    // Variational lower bound against the dense reference.
    CHECK(r.e0 >= *r.e0_ed - 1e-9);

    // The stored states really produce the stored energies. The excited
    // energy is the Rayleigh quotient of the shift-augmented operator with
    // delta = |E0|, so the residual ground overlap contributes there.
    const HamiltonianOperator op = build_operator(p, ac, r.s);
    CHECK(op.quadratic_form(r.psi0) == doctest::Approx(r.e0).epsilon(1e-9));
    const double overlap = r.psi0.dot(r.psi1);
    CHECK(op.quadratic_form(r.psi1) + std::abs(r.e0) * overlap * overlap ==
          doctest::Approx(r.e1).epsilon(1e-9));
  }
}

TEST_CASE("sweeps are deterministic in the seed") {
  const IsingProblem p = tfim_instance(2);
  const AnnealCoefficients ac = AnnealCoefficients::parametric();
  SweepConfig cfg = small_sweep_config();
  cfg.grid_steps = 3;
  const auto a = run_sweep(p, ac, cfg, 9);
  const auto b = run_sweep(p, ac, cfg, 9);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].e0 == b[i].e0);
    CHECK(a[i].e1 == b[i].e1);
    CHECK(a[i].epochs0 == b[i].epochs0);
    CHECK(a[i].epochs1 == b[i].epochs1);
  }
  const auto c = run_sweep(p, ac, cfg, 10);
  bool any_differs = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    any_differs = any_differs || a[i].e0 != c[i].e0 || a[i].epochs0 != c[i].epochs0;
  }
  CHECK(any_differs);
}

TEST_CASE("the penalty method matches the shift method on the same grid") {
  const IsingProblem p = tfim_instance(2);
  const AnnealCoefficients ac = AnnealCoefficients::parametric();
  SweepConfig cfg = small_sweep_config();
  cfg.grid_steps = 3;
  cfg.excited_method = ExcitedMethod::penalty;
  const auto records = run_sweep(p, ac, cfg, 5);
  for (const SpectralRecord& r : records) {
    REQUIRE(r.relerr1.has_value());
    CHECK(*r.relerr1 < 2.0);
  }
}

TEST_CASE("disabling the dense reference leaves the ED fields empty") {
  const IsingProblem p = tfim_instance(2);
  const AnnealCoefficients ac = AnnealCoefficients::parametric();
  SweepConfig cfg = small_sweep_config();
  cfg.grid_steps = 3;
  cfg.with_ed = false;
  const auto records = run_sweep(p, ac, cfg, 5);
  for (const SpectralRecord& r : records) {
    CHECK_FALSE(r.e0_ed.has_value());
    CHECK_FALSE(r.relerr0.has_value());
  }

  TempPath tmp("sweep_no_ed.csv");
  write_sweep_csv(records, tmp.path);
  const auto rows = read_sweep_csv(tmp.path);
  REQUIRE(rows.size() == records.size());
  for (const SweepRow& row : rows) {
    CHECK_FALSE(row.e0_ed.has_value());
    CHECK_FALSE(row.relerr1.has_value());
  }
}

TEST_CASE("an unconvergeable grid point aborts the sweep by name") {
  const IsingProblem p = tfim_instance(2);
  const AnnealCoefficients ac = AnnealCoefficients::parametric();
  SweepConfig cfg = small_sweep_config();
  cfg.grid_steps = 3;
  cfg.training.max_epochs = 3;
  cfg.training.window = 2;
  cfg.training.tol = 1e-300;
  CHECK_THROWS_WITH_AS(run_sweep(p, ac, cfg, 1),
                       doctest::Contains("at s = "), convergence_error);
}

TEST_CASE("sweep rows survive the CSV round trip") {
  const IsingProblem p = tfim_instance(2);
  const AnnealCoefficients ac = AnnealCoefficients::parametric();
  SweepConfig cfg = small_sweep_config();
  cfg.grid_steps = 3;
  const auto records = run_sweep(p, ac, cfg, 2);

  TempPath tmp("sweep_roundtrip.csv");
  write_sweep_csv(records, tmp.path);
  const auto rows = read_sweep_csv(tmp.path);
  REQUIRE(rows.size() == records.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    // %.10g keeps 10 significant digits.
    CHECK(rows[i].s == doctest::Approx(records[i].s).epsilon(1e-9));
    CHECK(rows[i].e0 == doctest::Approx(records[i].e0).epsilon(1e-9));
    CHECK(rows[i].e1 == doctest::Approx(records[i].e1).epsilon(1e-9));
    CHECK(rows[i].gap == doctest::Approx(records[i].gap).epsilon(1e-9));
    REQUIRE(rows[i].e0_ed.has_value());
    CHECK(*rows[i].e0_ed == doctest::Approx(*records[i].e0_ed).epsilon(1e-9));
    CHECK(rows[i].epochs0 == records[i].epochs0);
    CHECK(rows[i].epochs1 == records[i].epochs1);
  }
  CHECK_THROWS_AS(read_sweep_csv("/tmp/nqdt_test_missing_sweep.csv"),
                  input_error);
}

TEST_CASE("gap_profile finds the narrowest point") {
  std::vector<SpectralRecord> records(3);
  records[0].s = 0.0;
  records[0].gap = 1.0;
  records[1].s = 0.5;
  records[1].gap = 0.2;
  records[2].s = 1.0;
  records[2].gap = 0.7;
  const GapProfile gp = gap_profile(records);
  CHECK(gp.s == std::vector<double>{0.0, 0.5, 1.0});
  CHECK(gp.gap == std::vector<double>{1.0, 0.2, 0.7});
  CHECK(gp.argmin == 1);
  CHECK_THROWS_AS(gap_profile({}), input_error);
}

TEST_CASE("warm starts share the cold arm's network at the first grid point") {
  const IsingProblem p = tfim_instance(2);
  const AnnealCoefficients ac = AnnealCoefficients::parametric();
  SweepConfig cfg = small_sweep_config();
  cfg.grid_steps = 4;
  const TransferBenefit tb = transfer_benefit(p, ac, cfg, 13);

  REQUIRE(tb.s.size() == 4);
  REQUIRE(tb.epochs_transfer.size() == 4);
  REQUIRE(tb.epochs_cold.size() == 4);
  // Both arms start from the identical network at s = 0, so the first entry
  // must agree exactly.
  CHECK(tb.epochs_transfer[0] == tb.epochs_cold[0]);
  CHECK(tb.converged_transfer[0] == tb.converged_cold[0]);
  for (int e : tb.epochs_transfer) CHECK(e > 0);
  for (int e : tb.epochs_cold) CHECK(e > 0);
}

TEST_CASE("grid configuration is validated") {
  const IsingProblem p = tfim_instance(2);
  const AnnealCoefficients ac = AnnealCoefficients::parametric();
  SweepConfig cfg = small_sweep_config();
  cfg.grid_steps = 1;
  CHECK_THROWS_AS(run_sweep(p, ac, cfg, 0), input_error);
  cfg = small_sweep_config();
  cfg.hidden = 0;
  CHECK_THROWS_AS(run_sweep(p, ac, cfg, 0), input_error);
  cfg = small_sweep_config();
  cfg.delta_policy.kind = DeltaPolicy::Kind::fixed;
  cfg.delta_policy.value = -2.0;
  CHECK_THROWS_AS(run_sweep(p, ac, cfg, 0), input_error);
}
