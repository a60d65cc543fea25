// Copyright 2026 The nqdt Authors
// SPDX-License-Identifier: Apache-2.0

#include "nqdt/ansatz.hpp"

#include <cmath>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <string>
#include <utility>

#include "nqdt/errors.hpp"
#include "nqdt/random.hpp"

namespace nqdt {

namespace {

using nlohmann::json;

constexpr const char* kCheckpointVersion = "nqdt-ansatz-v1";

void check_shape(int n, int hidden) {
  if (n < 1 || n > 20) {
    throw input_error("ansatz input size " + std::to_string(n) +
                      " outside [1, 20]");
  }
  if (hidden < 1 || hidden > 100000) {
    throw input_error("hidden width " + std::to_string(hidden) +
                      " outside [1, 100000]");
  }
}

}  // namespace

WavefunctionAnsatz WavefunctionAnsatz::init(int n, int hidden,
                                            std::uint64_t seed) {
  check_shape(n, hidden);
  SeededRng rng(seed);

  // Draw order: W1 row by row, then w2. Biases start at zero and consume
  // no draws, so the stream layout is part of the reproducibility contract.
  Eigen::MatrixXd w1(hidden, n);
  const double bound1 = 1.0 / std::sqrt(static_cast<double>(n));
  for (int r = 0; r < hidden; ++r) {
    for (int c = 0; c < n; ++c) w1(r, c) = rng.uniform(-bound1, bound1);
  }
  Eigen::VectorXd w2(hidden);
  const double bound2 = 1.0 / std::sqrt(static_cast<double>(hidden));
  for (int r = 0; r < hidden; ++r) w2[r] = rng.uniform(-bound2, bound2);

  return WavefunctionAnsatz(std::move(w1), Eigen::VectorXd::Zero(hidden),
                            std::move(w2), 0.0);
}

WavefunctionAnsatz::WavefunctionAnsatz(Eigen::MatrixXd w1, Eigen::VectorXd b1,
                                       Eigen::VectorXd w2, double b2)
    : w1_(std::move(w1)), b1_(std::move(b1)), w2_(std::move(w2)), b2_(b2) {
  check_shape(static_cast<int>(w1_.cols()), static_cast<int>(w1_.rows()));
  if (b1_.size() != w1_.rows() || w2_.size() != w1_.rows()) {
    throw input_error("ansatz weight shapes disagree");
  }
  if (!w1_.allFinite() || !b1_.allFinite() || !w2_.allFinite() ||
      !std::isfinite(b2_)) {
    throw input_error("non-finite ansatz weight");
  }
}

Eigen::Index WavefunctionAnsatz::parameter_count() const {
  return w1_.size() + b1_.size() + w2_.size() + 1;
}

double WavefunctionAnsatz::eval(const SpinConfiguration& x) const {
  if (static_cast<int>(x.spins.size()) != n_in()) {
    throw input_error("configuration has wrong spin count");
  }
  Eigen::VectorXd xv(n_in());
  for (int i = 0; i < n_in(); ++i) {
    if (x.spins[i] != 1 && x.spins[i] != -1) {
      throw input_error("spin value must be +1 or -1");
    }
    xv[i] = static_cast<double>(x.spins[i]);
  }
  const Eigen::VectorXd hidden = ((w1_ * xv + b1_).array().max(0.0)).matrix();
  return std::tanh(w2_.dot(hidden) + b2_);
}

double WavefunctionAnsatz::eval_index(std::uint64_t index) const {
  return eval(SpinConfiguration::from_index(n_in(), index));
}

Eigen::VectorXd WavefunctionAnsatz::amplitudes() const {
  const Eigen::MatrixXd x = spin_input_matrix(n_in());
  Eigen::MatrixXd z1 = x * w1_.transpose();
  z1.rowwise() += b1_.transpose();
  const Eigen::MatrixXd a1 = z1.array().max(0.0).matrix();
  return ((a1 * w2_).array() + b2_).tanh().matrix();
}

Eigen::VectorXd WavefunctionAnsatz::parameters() const {
  Eigen::VectorXd theta(parameter_count());
  Eigen::Index at = 0;
  for (Eigen::Index r = 0; r < w1_.rows(); ++r) {
    theta.segment(at, w1_.cols()) = w1_.row(r).transpose();
    at += w1_.cols();
  }
  theta.segment(at, b1_.size()) = b1_;
  at += b1_.size();
  theta.segment(at, w2_.size()) = w2_;
  at += w2_.size();
  theta[at] = b2_;
  return theta;
}

void WavefunctionAnsatz::set_parameters(const Eigen::VectorXd& theta) {
  if (theta.size() != parameter_count()) {
    throw input_error("parameter vector has wrong length");
  }
  if (!theta.allFinite()) throw input_error("non-finite parameter");
  Eigen::Index at = 0;
  for (Eigen::Index r = 0; r < w1_.rows(); ++r) {
    w1_.row(r) = theta.segment(at, w1_.cols()).transpose();
    at += w1_.cols();
  }
  b1_ = theta.segment(at, b1_.size());
  at += b1_.size();
  w2_ = theta.segment(at, w2_.size());
  at += w2_.size();
  b2_ = theta[at];
}

StateVector full_state(const WavefunctionAnsatz& a) {
  StateVector sv;
  sv.amps = a.amplitudes();
  sv.norm_sq = sv.amps.squaredNorm();
  if (!(sv.norm_sq > 0.0) || !std::isfinite(sv.norm_sq)) {
    throw convergence_error("ansatz collapsed to the zero state");
  }
  return sv;
}

WavefunctionAnsatz transfer(const WavefunctionAnsatz& src) {
  return src;  // value semantics; the copy is already independent
}

Eigen::MatrixXd spin_input_matrix(int n) {
  check_shape(n, 1);
  const Eigen::Index dim = Eigen::Index{1} << n;
  Eigen::MatrixXd x(dim, n);
  for (Eigen::Index row = 0; row < dim; ++row) {
    for (int i = 0; i < n; ++i) {
      x(row, i) = static_cast<double>(spin_of(static_cast<std::uint64_t>(row), i));
    }
  }
  return x;
}

void save_checkpoint(const WavefunctionAnsatz& a, const std::string& path) {
  json j;
  j["version"] = kCheckpointVersion;
  j["n"] = a.n_in();
  j["hidden"] = a.hidden();
  const Eigen::VectorXd theta = a.parameters();
  j["parameters"] = std::vector<double>(theta.data(), theta.data() + theta.size());
  std::ofstream out(path);
  if (!out) throw input_error("cannot write checkpoint: " + path);
  out << j.dump(2) << "\n";
}

WavefunctionAnsatz load_checkpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw input_error("cannot open checkpoint: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  json j;
  try {
    j = json::parse(buf.str());
  } catch (const json::parse_error& e) {
    throw input_error(std::string("checkpoint JSON: ") + e.what());
  }
  try {
    const std::string version = j.at("version").get<std::string>();
    if (version != kCheckpointVersion) {
      throw input_error("checkpoint version \"" + version +
                        "\" is not \"" + kCheckpointVersion + "\"");
    }
    const int n = j.at("n").get<int>();
    const int hidden = j.at("hidden").get<int>();
    check_shape(n, hidden);
    const auto values = j.at("parameters").get<std::vector<double>>();
    WavefunctionAnsatz a(Eigen::MatrixXd::Zero(hidden, n),
                         Eigen::VectorXd::Zero(hidden),
                         Eigen::VectorXd::Zero(hidden), 0.0);
    if (static_cast<Eigen::Index>(values.size()) != a.parameter_count()) {
      throw input_error("checkpoint parameter count mismatch");
    }
    a.set_parameters(Eigen::Map<const Eigen::VectorXd>(
        values.data(), static_cast<Eigen::Index>(values.size())));
    return a;
  } catch (const json::exception& e) {
    throw input_error(std::string("checkpoint JSON: ") + e.what());
  }
}

}  // namespace nqdt
