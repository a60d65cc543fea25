// Copyright 2026 The nqdt Authors
// SPDX-License-Identifier: Apache-2.0

#include "nqdt/training.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <nlohmann/json.hpp>
#include <string>
#include <utility>

#include "nqdt/errors.hpp"
#include "nqdt/exact.hpp"

namespace nqdt {

namespace {

using nlohmann::json;

void validate_config(const TrainingConfig& cfg) {
  if (!(cfg.learning_rate > 0.0) || !std::isfinite(cfg.learning_rate)) {
    throw input_error("learning rate must be positive and finite");
  }
  if (cfg.max_epochs < 1 || cfg.max_epochs > 10000000) {
    throw input_error("max_epochs outside [1, 1e7]");
  }
  if (cfg.window < 2) throw input_error("stopping window must be >= 2");
  if (!(cfg.tol > 0.0)) throw input_error("stopping tolerance must be positive");
  if (!(cfg.rms_decay >= 0.0 && cfg.rms_decay < 1.0)) {
    throw input_error("rms_decay outside [0, 1)");
  }
  if (!(cfg.rms_epsilon > 0.0)) throw input_error("rms_epsilon must be positive");
  if (!(cfg.ortho_tol > 0.0)) throw input_error("ortho_tol must be positive");
}

// One full-basis forward/backward sweep. Gradients follow the flat layout
// [W1 row-major | b1 | w2 | b2]; the ReLU subgradient at exactly zero is
// taken as zero.
struct FusedEval {
  Eigen::VectorXd psi;
  Eigen::VectorXd hpsi;
  double z = 0.0;
  double energy = 0.0;  // Rayleigh quotient against the operator passed in
};

void fused_energy_gradient(const Eigen::MatrixXd& x, const WavefunctionAnsatz& a,
                           const HamiltonianOperator& op, FusedEval& ev,
                           Eigen::VectorXd* grad) {
  Eigen::MatrixXd z1 = x * a.w1().transpose();
  z1.rowwise() += a.b1().transpose();
  const Eigen::MatrixXd a1 = z1.array().max(0.0).matrix();
  ev.psi = ((a1 * a.w2()).array() + a.b2()).tanh().matrix();
  ev.z = ev.psi.squaredNorm();
  if (!(ev.z > 0.0) || !std::isfinite(ev.z)) {
    throw convergence_error("ansatz collapsed to the zero state");
  }
  op.apply(ev.psi, ev.hpsi);
  ev.energy = ev.psi.dot(ev.hpsi) / ev.z;

  if (grad == nullptr) return;

  // dE/dpsi = 2 (H psi - E psi) / Z, then back through tanh and the ReLU mask.
  const Eigen::VectorXd r = (2.0 / ev.z) * (ev.hpsi - ev.energy * ev.psi);
  const Eigen::VectorXd t =
      (r.array() * (1.0 - ev.psi.array().square())).matrix();

  const Eigen::VectorXd grad_w2 = a1.transpose() * t;
  const double grad_b2 = t.sum();
  const Eigen::MatrixXd g1 =
      ((t * a.w2().transpose()).array() * (z1.array() > 0.0).cast<double>())
          .matrix();
  const Eigen::MatrixXd grad_w1 = g1.transpose() * x;
  const Eigen::VectorXd grad_b1 = g1.colwise().sum().transpose();

  const int n = a.n_in();
  const int h = a.hidden();
  grad->resize(a.parameter_count());
  Eigen::Index at = 0;
  for (int row = 0; row < h; ++row) {
    grad->segment(at, n) = grad_w1.row(row).transpose();
    at += n;
  }
  grad->segment(at, h) = grad_b1;
  at += h;
  grad->segment(at, h) = grad_w2;
  at += h;
  (*grad)[at] = grad_b2;
}

// Squared normalised overlap of psi with one frozen state.
double overlap_sq(const Eigen::VectorXd& frozen_amps, double frozen_norm_sq,
                  const Eigen::VectorXd& psi, double z) {
  const double dot = frozen_amps.dot(psi);
  return dot * dot / (frozen_norm_sq * z);
}

struct EpochCallbacks {
  // Maps the objective-operator energy to the reported trace entry.
  std::function<double(const FusedEval&)> trace_energy;
  // Extra stopping requirement beyond the variance rule.
  std::function<bool(const FusedEval&)> extra_stop;
};

TrainResult descend(const HamiltonianOperator& op,
                    const WavefunctionAnsatz& start, const TrainingConfig& cfg,
                    const EpochCallbacks& cb) {
  validate_config(cfg);
  if (start.n_in() != op.n_spins()) {
    throw input_error("ansatz input size does not match operator");
  }

  WavefunctionAnsatz a = start;
  const Eigen::MatrixXd x = spin_input_matrix(a.n_in());
  Eigen::VectorXd theta = a.parameters();
  Eigen::VectorXd v = Eigen::VectorXd::Zero(theta.size());
  Eigen::VectorXd g;
  FusedEval ev;

  TrainResult result{std::move(a), {}};
  TrainingReport& rep = result.report;
  rep.energy_trace.reserve(static_cast<std::size_t>(cfg.max_epochs));

  // With exact gradients RMSprop does not settle on its own: near a minimum
  // the update tends to lr * sign(g) per coordinate and the energy keeps
  // bouncing at an amplitude set by lr. The step is halved whenever the
  // objective has not improved by at least tol over a full window, which
  // leaves the descent phase untouched and collapses the terminal bounce
  // until the variance rule can fire.
  double lr = cfg.learning_rate;
  double best_objective = std::numeric_limits<double>::infinity();
  int epochs_since_improvement = 0;

  for (;;) {
    fused_energy_gradient(x, result.ansatz, op, ev, &g);
    rep.energy_trace.push_back(cb.trace_energy ? cb.trace_energy(ev)
                                               : ev.energy);

    if (stop_check(rep.energy_trace, cfg.window, cfg.tol) &&
        (!cb.extra_stop || cb.extra_stop(ev))) {
      rep.converged = true;
      rep.stop_reason =
          cb.extra_stop ? StopReason::orthogonality_variance : StopReason::variance;
      break;
    }
    if (static_cast<int>(rep.energy_trace.size()) >= cfg.max_epochs) {
      rep.converged = false;
      rep.stop_reason = StopReason::max_epochs;
      break;
    }

    if (ev.energy < best_objective - cfg.tol) {
      best_objective = ev.energy;
      epochs_since_improvement = 0;
    } else if (++epochs_since_improvement >= cfg.window) {
      lr *= 0.5;
      epochs_since_improvement = 0;
    }

    // RMSprop. The update is skipped once a stop fires, so the returned
    // parameters are exactly the ones behind energy_trace.back().
    v = cfg.rms_decay * v + (1.0 - cfg.rms_decay) * g.cwiseProduct(g);
    theta -= lr * (g.array() / (v.array().sqrt() + cfg.rms_epsilon)).matrix();
    result.ansatz.set_parameters(theta);
  }

  rep.epochs_run = static_cast<int>(rep.energy_trace.size());
  rep.final_energy = rep.energy_trace.back();
  return result;
}

}  // namespace

TrainingReport::TrainingReport()
    : final_orthogonality(std::numeric_limits<double>::quiet_NaN()) {}

const char* to_string(StopReason r) {
  switch (r) {
    case StopReason::variance:
      return "variance";
    case StopReason::max_epochs:
      return "max_epochs";
    case StopReason::orthogonality_variance:
      return "orthogonality_variance";
  }
  return "unknown";
}

bool stop_check(const std::vector<double>& trace, int window, double tol) {
  if (window < 1) throw input_error("stopping window must be >= 1");
  if (static_cast<int>(trace.size()) < window) return false;
  const std::size_t begin = trace.size() - static_cast<std::size_t>(window);
  double mean = 0.0;
  for (std::size_t i = begin; i < trace.size(); ++i) mean += trace[i];
  mean /= window;
  double var = 0.0;
  for (std::size_t i = begin; i < trace.size(); ++i) {
    var += (trace[i] - mean) * (trace[i] - mean);
  }
  return std::sqrt(var / window) < tol;
}

double local_energy(const StateVector& psi, std::uint64_t index,
                    const HamiltonianOperator& op) {
  const Eigen::Index x = static_cast<Eigen::Index>(index);
  if (x < 0 || x >= op.dim()) throw input_error("configuration index out of range");
  if (psi.amps.size() != op.dim()) {
    throw input_error("state has wrong dimension");
  }
  const double amp = psi.amps[x];
  if (amp == 0.0) {
    throw input_error("local energy undefined at zero-amplitude configuration " +
                      std::to_string(index));
  }
  // Row x of H against psi: diagonal, one term per spin flip, then any
  // rank-one corrections.
  double acc = op.diagonal()[x] * amp;
  for (int i = 0; i < op.n_spins(); ++i) {
    acc += op.transverse_weight() * psi.amps[x ^ (Eigen::Index{1} << i)];
  }
  for (const RankOneTerm& term : op.rank_one_terms()) {
    acc += term.delta * term.state[x] * term.state.dot(psi.amps);
  }
  return acc / amp;
}

double local_energy(const WavefunctionAnsatz& a, const SpinConfiguration& x,
                    const HamiltonianOperator& op) {
  return local_energy(full_state(a), x.index(), op);
}

double energy_expectation(const StateVector& psi, const HamiltonianOperator& op) {
  if (psi.amps.size() != op.dim()) {
    throw input_error("state has wrong dimension");
  }
  if (!(psi.norm_sq > 0.0)) throw input_error("state has zero norm");
  const Eigen::VectorXd hpsi = op.apply(psi.amps);
  // Born-weighted local energies. Configurations whose squared amplitude
  // underflows carry no weight and are skipped; everything else stays finite.
  double e = 0.0;
  for (Eigen::Index x = 0; x < psi.amps.size(); ++x) {
    const double amp = psi.amps[x];
    const double w = amp * amp / psi.norm_sq;
    if (amp * amp == 0.0) continue;
    e += w * (hpsi[x] / amp);
  }
  return e;
}

double energy_expectation(const WavefunctionAnsatz& a,
                          const HamiltonianOperator& op) {
  return energy_expectation(full_state(a), op);
}

Eigen::VectorXd gradient(const WavefunctionAnsatz& a,
                         const HamiltonianOperator& op) {
  if (a.n_in() != op.n_spins()) {
    throw input_error("ansatz input size does not match operator");
  }
  FusedEval ev;
  Eigen::VectorXd g;
  fused_energy_gradient(spin_input_matrix(a.n_in()), a, op, ev, &g);
  return g;
}

TrainResult train_ground(const HamiltonianOperator& op,
                         const WavefunctionAnsatz& start,
                         const TrainingConfig& cfg) {
  return descend(op, start, cfg, {});
}

TrainResult train_excited_brauer(const HamiltonianOperator& op,
                                 const StateVector& psi0,
                                 const WavefunctionAnsatz& start,
                                 const TrainingConfig& cfg, double delta,
                                 bool promotion_guard) {
  if (!std::isfinite(delta)) throw input_error("non-finite spectral shift");
  const HamiltonianOperator shifted = brauer_shift(op, psi0.amps, delta);

  std::vector<std::string> warnings;
  if (promotion_guard && op.dim() <= 4096) {
    // The shift promotes the first excited level only when E1 <= E0 + delta
    // (up to the quality of psi0). Diagonalising both operators makes the
    // check exact; a failed promotion is reported, not fatal, because the
    // run may still be useful diagnostically. The margin absorbs the
    // residual error of a trained rather than exact psi0.
    const Spectrum base = exact_spectrum(op, 1);
    const Spectrum moved = exact_spectrum(shifted, 1);
    const double e1 = base.eigenvalues[1];
    const double shifted_ground = moved.eigenvalues[0];
    const double margin = std::max(1e-6, 0.02 * std::abs(e1));
    if (shifted_ground < e1 - margin) {
      warnings.push_back(
          "spectral shift delta = " + std::to_string(delta) +
          " fails to promote the first excited level: shifted ground " +
          std::to_string(shifted_ground) + " sits below E1 = " +
          std::to_string(e1));
    }
  }

  TrainResult result = descend(shifted, start, cfg, {});
  result.report.warnings.insert(result.report.warnings.begin(), warnings.begin(),
                                warnings.end());
  return result;
}

double orthogonality_measure(const StateVector& psi,
                             const std::vector<StateVector>& lower) {
  if (!(psi.norm_sq > 0.0)) throw input_error("state has zero norm");
  double sum = 0.0;
  for (const StateVector& f : lower) {
    if (f.amps.size() != psi.amps.size()) {
      throw input_error("state dimensions disagree");
    }
    if (!(f.norm_sq > 0.0)) throw input_error("frozen state has zero norm");
    sum += overlap_sq(f.amps, f.norm_sq, psi.amps, psi.norm_sq);
  }
  return sum;
}

TrainResult train_excited_penalty(const HamiltonianOperator& op,
                                  const std::vector<StateVector>& lower,
                                  const std::vector<double>& lambdas,
                                  const WavefunctionAnsatz& start,
                                  const TrainingConfig& cfg) {
  if (lower.empty()) throw input_error("penalty training needs frozen states");
  if (lambdas.size() != lower.size()) {
    throw input_error("one penalty weight per frozen state required");
  }
  for (double l : lambdas) {
    if (!(l > 0.0) || !std::isfinite(l)) {
      throw input_error("penalty weights must be positive and finite");
    }
  }

  // The penalised loss E[psi] + sum_k lambda_k o_k with normalised overlaps
  // o_k is the plain Rayleigh quotient of H + sum_k lambda_k P_k, so the
  // descent machinery is reused on the augmented operator while the trace
  // and stop rule watch the physical energy and residual overlap.
  HamiltonianOperator augmented = op;
  for (std::size_t k = 0; k < lower.size(); ++k) {
    const double norm = lower[k].amps.norm();
    if (!(norm > 0.0)) throw input_error("frozen state has zero norm");
    augmented.add_rank_one(lambdas[k], lower[k].amps / norm);
  }

  auto penalty_of = [&](const FusedEval& ev) {
    double p = 0.0;
    for (std::size_t k = 0; k < lower.size(); ++k) {
      p += lambdas[k] *
           overlap_sq(lower[k].amps, lower[k].norm_sq, ev.psi, ev.z);
    }
    return p;
  };
  auto overlap_of = [&](const FusedEval& ev) {
    double o = 0.0;
    for (const StateVector& f : lower) {
      o += overlap_sq(f.amps, f.norm_sq, ev.psi, ev.z);
    }
    return o;
  };

  EpochCallbacks cb;
  cb.trace_energy = [&](const FusedEval& ev) { return ev.energy - penalty_of(ev); };
  cb.extra_stop = [&](const FusedEval& ev) {
    return overlap_of(ev) < cfg.ortho_tol;
  };

  TrainResult result = descend(augmented, start, cfg, cb);
  result.report.final_orthogonality =
      orthogonality_measure(full_state(result.ansatz), lower);
  return result;
}

std::string report_to_json(const TrainingReport& r, int trace_stride) {
  json j;
  j["final_energy"] = r.final_energy;
  j["epochs_run"] = r.epochs_run;
  j["converged"] = r.converged;
  j["stop_reason"] = to_string(r.stop_reason);
  if (std::isfinite(r.final_orthogonality)) {
    j["final_orthogonality"] = r.final_orthogonality;
  }
  j["warnings"] = r.warnings;
  if (trace_stride > 0 && !r.energy_trace.empty()) {
    json trace = json::array();
    for (std::size_t i = 0; i < r.energy_trace.size();
         i += static_cast<std::size_t>(trace_stride)) {
      trace.push_back(r.energy_trace[i]);
    }
    if ((r.energy_trace.size() - 1) % static_cast<std::size_t>(trace_stride) !=
        0) {
      trace.push_back(r.energy_trace.back());
    }
    j["energy_trace"] = trace;
  }
  return j.dump(2) + "\n";
}

}  // namespace nqdt
