// Copyright 2026 The nqdt Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

namespace nqdt {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace nqdt
