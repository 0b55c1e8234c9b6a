// SPDX-FileCopyrightText: 2026 instructbio authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

namespace ibio {

inline constexpr const char* kVersionString = "0.1.0";

}  // namespace ibio
