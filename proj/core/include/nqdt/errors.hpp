// Copyright 2026 The nqdt Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace nqdt {

// Error taxonomy shared by the library and the CLI. Each class maps to a
// process exit code so scripted pipelines can branch on failure kind.
//
//   input_error        -> 2  (malformed files, out-of-range arguments)
//   singularity_error  -> 2  (degenerate spectra where a formula divides by a gap)
//   capacity_error     -> 3  (problem size exceeds the dense-solver budget)
//   convergence_error  -> 4  (training or integrator accuracy failures)

class input_error : public std::runtime_error {
 public:
  explicit input_error(const std::string& what) : std::runtime_error(what) {}
};

class singularity_error : public std::runtime_error {
 public:
  explicit singularity_error(const std::string& what) : std::runtime_error(what) {}
};

class capacity_error : public std::runtime_error {
 public:
  explicit capacity_error(const std::string& what) : std::runtime_error(what) {}
};

class convergence_error : public std::runtime_error {
 public:
  explicit convergence_error(const std::string& what) : std::runtime_error(what) {}
};

inline int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const input_error*>(&e) != nullptr) return 2;
  if (dynamic_cast<const singularity_error*>(&e) != nullptr) return 2;
  if (dynamic_cast<const capacity_error*>(&e) != nullptr) return 3;
  if (dynamic_cast<const convergence_error*>(&e) != nullptr) return 4;
  return 1;
}

}  // namespace nqdt
