// Copyright 2026 The nqdt Authors
// SPDX-License-Identifier: Apache-2.0

#include "nqdt/apt.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <nlohmann/json.hpp>
#include <string>

#include "nqdt/errors.hpp"
#include "nqdt/exact.hpp"
#include "nqdt/operator.hpp"

namespace nqdt {

namespace {

using nlohmann::json;
using cplx = std::complex<double>;

constexpr Eigen::Index kDenseLimit = 4096;

void check_problem_size(const IsingProblem& p) {
  validate(p);
  if ((Eigen::Index{1} << p.n) > kDenseLimit) {
    throw capacity_error("problem dimension 2^" + std::to_string(p.n) +
                         " exceeds dense solver limit " +
                         std::to_string(kDenseLimit));
  }
}

void check_schedule(const OptimizedSchedule& schedule) {
  if (schedule.points.size() < 2) {
    throw input_error("schedule needs at least 2 points");
  }
  for (std::size_t i = 1; i < schedule.points.size(); ++i) {
    if (!(schedule.points[i - 1].first < schedule.points[i].first)) {
      throw input_error("schedule times must strictly increase");
    }
  }
}

double clamp01(double s) { return std::min(1.0, std::max(0.0, s)); }

// Aligns the sign of `vec` with `prev`, or with a canonical choice (largest
// magnitude component positive) when there is no previous node yet.
void fix_gauge(Eigen::VectorXd& vec, const Eigen::VectorXd& prev, bool flip) {
  if (prev.size() == 0) {
    Eigen::Index imax = 0;
    vec.cwiseAbs().maxCoeff(&imax);
    if (vec[imax] < 0.0) vec = -vec;
    if (flip) vec = -vec;
  } else if (prev.dot(vec) < 0.0) {
    vec = -vec;
  }
}

}  // namespace

AptResult apt_transition(const IsingProblem& p, const AnnealCoefficients& ac,
                         const OptimizedSchedule& schedule, int target_level,
                         int quad_points_per_segment, const AptGauge& gauge) {
  check_problem_size(p);
  check_schedule(schedule);
  const Eigen::Index dim = Eigen::Index{1} << p.n;
  if (target_level < 1 || target_level >= dim) {
    throw input_error("target level " + std::to_string(target_level) +
                      " outside [1, " + std::to_string(dim - 1) + "]");
  }
  if (quad_points_per_segment < 1) {
    throw input_error("quadrature needs at least 1 point per segment");
  }

  AptResult result;
  cplx total(0.0, 0.0);

  // Phase and gauge carry across segment boundaries; the boundary node is
  // evaluated by both neighbouring segments with identical inputs, so its
  // two half-weight trapezoid contributions add up to the weight a merged
  // segment would give it.
  Eigen::VectorXd prev0, prevm;
  double phase = 0.0;
  double prev_gap = 0.0;
  double prev_t = schedule.points.front().first;
  bool first_node = true;

  for (std::size_t seg = 0; seg + 1 < schedule.points.size(); ++seg) {
    const auto& [ta, sa] = schedule.points[seg];
    const auto& [tb, sb] = schedule.points[seg + 1];
    const double sdot = (sb - sa) / (tb - ta);
    const int q = quad_points_per_segment;
    const double dt = (tb - ta) / q;

    cplx seg_sum(0.0, 0.0);
    for (int k = 0; k <= q; ++k) {
      const double t = (k == q) ? tb : ta + k * dt;
      const double s = clamp01(sa + sdot * (t - ta));

      const HamiltonianOperator op = build_operator(p, ac, s);
      const Spectrum sp = exact_spectrum(op, target_level + 1, kDenseLimit);
      const double e0 = sp.eigenvalues[0];
      const double em = sp.eigenvalues[target_level];
      const double gap = em - e0;
      if (std::abs(gap) < 1e-12 * std::max({1.0, std::abs(e0), std::abs(em)})) {
        throw singularity_error(
            "levels 0 and " + std::to_string(target_level) +
            " are degenerate at s = " + std::to_string(s) + ", t = " +
            std::to_string(t));
      }

      Eigen::VectorXd u0 = sp.eigenvectors.col(0);
      Eigen::VectorXd um = sp.eigenvectors.col(target_level);
      fix_gauge(u0, prev0, gauge.flip_ground);
      fix_gauge(um, prevm, gauge.flip_excited);
      prev0 = u0;
      prevm = um;

      if (!first_node) phase += 0.5 * (gap + prev_gap) * (t - prev_t);
      prev_gap = gap;
      prev_t = t;
      first_node = false;

      const HamiltonianOperator dh = d_operator_ds(p, ac, s);
      const double me = um.dot(dh.apply(u0));
      const cplx integrand =
          me / (e0 - em) * sdot * std::polar(1.0, phase);
      const double w = (k == 0 || k == q) ? 0.5 : 1.0;
      seg_sum += w * integrand * dt;
    }

    total += seg_sum;
    result.segment_magnitudes.push_back(std::abs(seg_sum));
  }

  result.amplitude = -total;
  result.probability = std::norm(result.amplitude);
  return result;
}

namespace {

// dpsi/dt = -i H(s(t)) psi without materialising operator objects per call.
struct Propagator {
  const IsingProblem* p;
  const AnnealCoefficients* ac;
  const OptimizedSchedule* schedule;
  Eigen::VectorXd ising_table;

  double s_of_t(double t) const {
    const auto& pts = schedule->points;
    if (t <= pts.front().first) return pts.front().second;
    if (t >= pts.back().first) return pts.back().second;
    std::size_t hi = 1;
    while (pts[hi].first < t) ++hi;
    const auto& [t0, s0] = pts[hi - 1];
    const auto& [t1, s1] = pts[hi];
    return clamp01(s0 + (s1 - s0) * (t - t0) / (t1 - t0));
  }

  void derivative(double t, const Eigen::VectorXcd& psi,
                  Eigen::VectorXcd& out) const {
    const CoeffValues cv = ac->at(s_of_t(t));
    const double diag_w = 0.5 * cv.b;
    const double flip_w = -0.5 * cv.a;
    const Eigen::Index d = psi.size();
    out.resize(d);
    for (Eigen::Index x = 0; x < d; ++x) {
      out[x] = diag_w * ising_table[x] * psi[x];
    }
    for (int i = 0; i < p->n; ++i) {
      const Eigen::Index bit = Eigen::Index{1} << i;
      for (Eigen::Index x = 0; x < d; ++x) {
        if ((x & bit) == 0) {
          out[x] += flip_w * psi[x + bit];
          out[x + bit] += flip_w * psi[x];
        }
      }
    }
    out *= cplx(0.0, -1.0);
  }

  Eigen::VectorXcd run(const Eigen::VectorXcd& initial, double dt) const {
    const double t_begin = schedule->points.front().first;
    const double t_end = schedule->points.back().first;
    Eigen::VectorXcd psi = initial;
    Eigen::VectorXcd k1, k2, k3, k4, tmp;
    double t = t_begin;
    const double eps = 1e-12 * std::max(1.0, std::abs(t_end));
    while (t < t_end - eps) {
      const double h = std::min(dt, t_end - t);
      derivative(t, psi, k1);
      tmp = psi + (0.5 * h) * k1;
      derivative(t + 0.5 * h, tmp, k2);
      tmp = psi + (0.5 * h) * k2;
      derivative(t + 0.5 * h, tmp, k3);
      tmp = psi + h * k3;
      derivative(t + h, tmp, k4);
      psi += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      t += h;
    }
    return psi;
  }
};

std::vector<double> level_probabilities(const Eigen::MatrixXd& eigvecs,
                                        const Eigen::VectorXcd& psi) {
  std::vector<double> probs(static_cast<std::size_t>(eigvecs.cols()));
  for (Eigen::Index m = 0; m < eigvecs.cols(); ++m) {
    const cplx amp = eigvecs.col(m).cast<cplx>().dot(psi);
    probs[static_cast<std::size_t>(m)] = std::norm(amp);
  }
  return probs;
}

}  // namespace

PropagationResult exact_propagation(const IsingProblem& p,
                                    const AnnealCoefficients& ac,
                                    const OptimizedSchedule& schedule,
                                    double dt) {
  check_problem_size(p);
  check_schedule(schedule);
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw input_error("time step must be positive and finite");
  }

  Propagator prop{&p, &ac, &schedule, ising_energy_table(p)};

  const double s_begin = prop.s_of_t(schedule.points.front().first);
  const double s_end = prop.s_of_t(schedule.points.back().first);
  const HamiltonianOperator h_begin = build_operator(p, ac, s_begin);
  const Spectrum sp_begin = exact_spectrum(h_begin, 1, kDenseLimit);
  const Eigen::VectorXcd initial = sp_begin.eigenvectors.col(0).cast<cplx>();

  const HamiltonianOperator h_end = build_operator(p, ac, s_end);
  const Spectrum sp_end =
      exact_spectrum(h_end, static_cast<int>(h_end.dim()), kDenseLimit);

  const Eigen::VectorXcd coarse = prop.run(initial, dt);
  const Eigen::VectorXcd fine = prop.run(initial, 0.5 * dt);
  const std::vector<double> probs_coarse =
      level_probabilities(sp_end.eigenvectors, coarse);
  std::vector<double> probs_fine = level_probabilities(sp_end.eigenvectors, fine);

  // Step-halving acceptance: every final-level probability must agree to 1%
  // (1e-9 absolute floor) between dt and dt/2, otherwise the step is too
  // coarse for this schedule and the caller must retry with a smaller dt.
  for (std::size_t m = 0; m < probs_fine.size(); ++m) {
    const double diff = std::abs(probs_fine[m] - probs_coarse[m]);
    const double allow =
        0.01 * std::max(probs_fine[m], probs_coarse[m]) + 1e-9;
    if (diff > allow) {
      throw convergence_error(
          "propagation not step-converged at level " + std::to_string(m) +
          ": |P(dt) - P(dt/2)| = " + std::to_string(diff) +
          " for dt = " + std::to_string(dt));
    }
  }

  PropagationResult result;
  result.probabilities = std::move(probs_fine);
  result.dt_used = 0.5 * dt;
  result.norm_drift = std::abs(fine.squaredNorm() - 1.0);
  return result;
}

std::string apt_result_to_json(const AptResult& r) {
  json j;
  j["amplitude"] = json::array({r.amplitude.real(), r.amplitude.imag()});
  j["probability"] = r.probability;
  j["segments"] = r.segment_magnitudes;
  return j.dump(2) + "\n";
}

}  // namespace nqdt
