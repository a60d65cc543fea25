// Copyright 2026 The nqdt Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <functional>

namespace nqdt {

// Worker budget for the few embarrassingly parallel spots (independent
// training runs in batch drivers). Resolves NQDT_THREADS when set to a
// positive integer, otherwise the hardware concurrency, and always at
// least 1.
int max_threads();

// Runs fn(i) for i in [0, count) on up to max_threads() workers. Falls back
// to a plain loop when only one worker is available or count is small.
// fn must not throw across threads for distinct i without its own guarding;
// the first captured exception is rethrown after all workers join.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

}  // namespace nqdt
