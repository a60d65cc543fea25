// Copyright 2026 The nqdt Authors
// SPDX-License-Identifier: Apache-2.0

#include "nqdt/ising.hpp"

#include <cmath>
#include <fstream>
#include <nlohmann/json.hpp>
#include <set>
#include <sstream>
#include <utility>

#include "nqdt/errors.hpp"
#include "nqdt/random.hpp"

namespace nqdt {

namespace {

using nlohmann::json;

constexpr int kMaxSpins = 20;  // 2^20 amplitudes; far beyond the dense solvers

}  // namespace

void validate(const IsingProblem& p) {
  if (p.n < 1 || p.n > kMaxSpins) {
    throw input_error("spin count " + std::to_string(p.n) +
                      " outside [1, " + std::to_string(kMaxSpins) + "]");
  }
  if (static_cast<int>(p.h.size()) != p.n) {
    throw input_error("field vector has " + std::to_string(p.h.size()) +
                      " entries for " + std::to_string(p.n) + " spins");
  }
  for (double hi : p.h) {
    if (!std::isfinite(hi)) throw input_error("non-finite field value");
  }
  if (!std::isfinite(p.offset)) throw input_error("non-finite offset");
  std::set<std::pair<int, int>> seen;
  for (const Coupling& c : p.couplings) {
    if (c.i < 0 || c.j >= p.n || c.i >= c.j) {
      throw input_error("coupling (" + std::to_string(c.i) + ", " +
                        std::to_string(c.j) + ") is not upper triangular in [0, " +
                        std::to_string(p.n) + ")");
    }
    if (!std::isfinite(c.value)) throw input_error("non-finite coupling value");
    if (!seen.emplace(c.i, c.j).second) {
      throw input_error("duplicate coupling (" + std::to_string(c.i) + ", " +
                        std::to_string(c.j) + ")");
    }
  }
}

double ising_energy(const IsingProblem& p, std::uint64_t index) {
  double e = 0.0;
  for (int i = 0; i < p.n; ++i) e += p.h[i] * spin_of(index, i);
  for (const Coupling& c : p.couplings) {
    e += c.value * spin_of(index, c.i) * spin_of(index, c.j);
  }
  return e;
}

Eigen::VectorXd ising_energy_table(const IsingProblem& p) {
  const std::uint64_t dim = 1ULL << p.n;
  Eigen::VectorXd table(static_cast<Eigen::Index>(dim));
  for (std::uint64_t x = 0; x < dim; ++x) {
    table[static_cast<Eigen::Index>(x)] = ising_energy(p, x);
  }
  return table;
}

SpinConfiguration SpinConfiguration::from_index(int n, std::uint64_t index) {
  SpinConfiguration c;
  c.spins.resize(n);
  for (int i = 0; i < n; ++i) c.spins[i] = spin_of(index, i);
  return c;
}

std::uint64_t SpinConfiguration::index() const {
  std::uint64_t idx = 0;
  for (std::size_t i = 0; i < spins.size(); ++i) {
    if (spins[i] == -1) {
      idx |= 1ULL << i;
    } else if (spins[i] != 1) {
      throw input_error("spin value must be +1 or -1");
    }
  }
  return idx;
}

IsingProblem qubo_to_ising(const Eigen::MatrixXd& q) {
  if (q.rows() != q.cols() || q.rows() < 1) {
    throw input_error("QUBO matrix must be square and non-empty");
  }
  const int n = static_cast<int>(q.rows());
  if (n > kMaxSpins) {
    throw input_error("QUBO size " + std::to_string(n) + " exceeds " +
                      std::to_string(kMaxSpins) + " variables");
  }
  if (!q.allFinite()) throw input_error("non-finite QUBO entry");

  const Eigen::MatrixXd qs = 0.5 * (q + q.transpose());

  IsingProblem p;
  p.n = n;
  p.h.assign(n, 0.0);
  // x_i = (1 - sigma_i)/2 turns x^T Q x into fields -Q'_ii/2 - sum_j Q'_ij/2,
  // couplings Q'_ij/2, and a constant absorbed into the offset.
  for (int i = 0; i < n; ++i) {
    double row_off = 0.0;
    for (int j = 0; j < n; ++j) {
      if (j != i) row_off += qs(i, j);
    }
    p.h[i] = -0.5 * qs(i, i) - 0.5 * row_off;
    p.offset += 0.5 * qs(i, i);
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      p.offset += 0.5 * qs(i, j);
      if (qs(i, j) != 0.0) p.couplings.push_back({i, j, 0.5 * qs(i, j)});
    }
  }
  validate(p);
  return p;
}

IsingProblem random_instance(int n, std::uint64_t seed) {
  if (n < 1 || n > kMaxSpins) {
    throw input_error("spin count " + std::to_string(n) + " outside [1, " +
                      std::to_string(kMaxSpins) + "]");
  }
  SeededRng rng(seed);
  IsingProblem p;
  p.n = n;
  p.seed = seed;
  p.h.resize(n);
  for (int i = 0; i < n; ++i) p.h[i] = rng.uniform(-1.0, 1.0);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      p.couplings.push_back({i, j, rng.uniform(-1.0, 1.0)});
    }
  }
  validate(p);
  return p;
}

IsingProblem tfim_instance(int n) {
  if (n < 2 || n > kMaxSpins) {
    throw input_error("chain length " + std::to_string(n) + " outside [2, " +
                      std::to_string(kMaxSpins) + "]");
  }
  IsingProblem p;
  p.n = n;
  p.h.assign(n, 0.0);
  for (int i = 0; i + 1 < n; ++i) p.couplings.push_back({i, i + 1, 1.0});
  validate(p);
  return p;
}

std::string problem_to_json(const IsingProblem& p) {
  validate(p);
  json j;
  j["n"] = p.n;
  j["h"] = p.h;
  json couplings = json::array();
  for (const Coupling& c : p.couplings) {
    couplings.push_back(json::array({c.i, c.j, c.value}));
  }
  j["J"] = couplings;
  j["offset"] = p.offset;
  if (p.seed) j["seed"] = *p.seed;
  return j.dump(2) + "\n";
}

IsingProblem problem_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw input_error(std::string("problem JSON: ") + e.what());
  }
  IsingProblem p;
  try {
    p.n = j.at("n").get<int>();
    p.h = j.at("h").get<std::vector<double>>();
    for (const auto& entry : j.at("J")) {
      if (!entry.is_array() || entry.size() != 3) {
        throw input_error("coupling entries must be [i, j, value] triples");
      }
      p.couplings.push_back({entry[0].get<int>(), entry[1].get<int>(),
                             entry[2].get<double>()});
    }
    p.offset = j.value("offset", 0.0);
    if (j.contains("seed")) p.seed = j.at("seed").get<std::uint64_t>();
  } catch (const json::exception& e) {
    throw input_error(std::string("problem JSON: ") + e.what());
  }
  validate(p);
  return p;
}

IsingProblem load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw input_error("cannot open problem file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return problem_from_json(buf.str());
}

void save_problem(const IsingProblem& p, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw input_error("cannot write problem file: " + path);
  out << problem_to_json(p);
}

}  // namespace nqdt
