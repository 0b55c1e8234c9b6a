// SPDX-FileCopyrightText: 2026 instructbio authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "ibio/tensor/param_store.hpp"

namespace ibio::tk {

struct GradCheckEntry {
  std::string param;
  double max_rel_err = 0.0;
  double max_abs_err = 0.0;
  bool ok = true;
};

struct GradCheckReport {
  std::vector<GradCheckEntry> entries;
  bool all_ok = true;
  double worst_rel_err = 0.0;
  std::string worst_param;
};

/// Compares tape gradients against central finite differences. The closure
/// must be deterministic for fixed parameter values (dropout off or with a
/// pinned stream). Returns a report; failures are recorded, not thrown.
GradCheckReport grad_check(
    const std::function<double(ParamStore&)>& loss_of_params,
    const std::function<std::map<std::string, Tensor>(ParamStore&)>&
        tape_gradients,
    ParamStore& params, double epsilon = 1e-5, double tolerance = 1e-4);

}  // namespace ibio::tk
