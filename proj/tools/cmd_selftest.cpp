// SPDX-FileCopyrightText: 2026 instructbio authors
// SPDX-License-Identifier: Apache-2.0

#include <cstdio>
#include <iostream>

#include "cli_common.hpp"
#include "commands.hpp"
#include "ibio/verify/oracles.hpp"

namespace ibio::cli {

int cmd_selftest(const SelftestArgs& args) {
  verify::SelftestOptions opts;
  opts.corrupt_gradient_op = args.inject_grad_fault;
  const std::vector<verify::CheckResult> results = verify::run_selftest(opts);

  bool all_ok = true;
  std::printf("%-30s %-6s %-12s %-10s %s\n", "check", "status", "value",
              "threshold", "detail");
  for (const auto& r : results) {
    std::printf("%-30s %-6s %-12.3e %-10.1e %s\n", r.name.c_str(),
                r.ok ? "PASS" : "FAIL", r.value, r.threshold, r.detail.c_str());
    all_ok = all_ok && r.ok;
  }
  if (!all_ok) {
    for (const auto& r : results) {
      if (!r.ok) std::cerr << "selftest failure: " << r.name << "\n";
    }
  }
  return all_ok ? kExitOk : kExitSelftestFailure;
}

}  // namespace ibio::cli
