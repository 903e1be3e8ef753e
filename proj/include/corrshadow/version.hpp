// Copyright (c) 2026 The corrshadow Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

namespace corrshadow {

inline constexpr const char* kToolName = "corrshadow";
inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace corrshadow
