// Copyright 2026 The nqdt Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <random>

namespace nqdt {

// Seeded random source with a portable uniform-double mapping.
//
// std::uniform_real_distribution is implementation defined, so two standard
// libraries fed the same mt19937_64 stream can disagree. We map raw 64-bit
// draws to [0, 1) with the usual 53-bit trick instead; identical seeds then
// produce identical instances and identical network initialisations on every
// platform.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1). Consumes exactly one engine draw.
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

 private:
  std::mt19937_64 engine_;
};

// Cheap stateless mixer for deriving independent streams from one user seed
// (ground vs excited nets, per-instance seeds, restart seeds). splitmix64
// finalizer; good dispersion even for adjacent tags.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (tag + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace nqdt
