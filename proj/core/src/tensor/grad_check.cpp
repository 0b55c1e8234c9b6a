// SPDX-FileCopyrightText: 2026 instructbio authors
// SPDX-License-Identifier: Apache-2.0

#include "ibio/tensor/grad_check.hpp"

#include <algorithm>
#include <cmath>

namespace ibio::tk {

GradCheckReport grad_check(
    const std::function<double(ParamStore&)>& loss_of_params,
    const std::function<std::map<std::string, Tensor>(ParamStore&)>&
        tape_gradients,
    ParamStore& params, double epsilon, double tolerance) {
  GradCheckReport report;
  const std::map<std::string, Tensor> grads = tape_gradients(params);

  // Noise floor for central differences at this loss scale: rounding of the
  // two evaluations (ulp(L)/2eps) plus slack for accumulation.
  const double base_loss = std::fabs(loss_of_params(params));
  const double noise_floor =
      std::max(1e-9, (1.0 + base_loss) * 2.3e-16 / (2.0 * epsilon) * 40.0);

  for (auto& [name, analytic] : grads) {
    GradCheckEntry entry;
    entry.param = name;
    Tensor& theta = params.at(name);
    for (std::size_t i = 0; i < theta.size(); ++i) {
      const double saved = theta[i];
      theta[i] = saved + epsilon;
      const double up = loss_of_params(params);
      theta[i] = saved - epsilon;
      const double down = loss_of_params(params);
      theta[i] = saved;
      const double fd = (up - down) / (2.0 * epsilon);
      const double abs_err = std::fabs(fd - analytic[i]);
      entry.max_abs_err = std::max(entry.max_abs_err, abs_err);
      // Below the finite-difference noise floor the comparison only measures
      // rounding error of the two loss evaluations.
      if (abs_err < noise_floor) continue;
      const double denom = std::max({std::fabs(fd), std::fabs(analytic[i]), 1e-8});
      entry.max_rel_err = std::max(entry.max_rel_err, abs_err / denom);
    }
    entry.ok = entry.max_rel_err < tolerance;
    report.all_ok = report.all_ok && entry.ok;
    if (entry.max_rel_err > report.worst_rel_err) {
      report.worst_rel_err = entry.max_rel_err;
      report.worst_param = name;
    }
    report.entries.push_back(std::move(entry));
  }
  return report;
}

}  // namespace ibio::tk
