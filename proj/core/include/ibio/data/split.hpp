// SPDX-FileCopyrightText: 2026 instructbio authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>

#include "ibio/data/dataset.hpp"

namespace ibio::data {

struct SplitRatios {
  double train = 0.8;
  double val = 0.1;
  double test = 0.1;
};

/// Groups molecules by scaffold key and assigns whole groups, largest first,
/// to the split with the lowest fill fraction. No scaffold key ever appears
/// in two splits. Ties between groups break on the lexicographic key; ties
/// between splits break in train/val/test order, so the result is
/// deterministic for a given dataset.
SplitResult scaffold_split(const Dataset& dataset,
                           const SplitRatios& ratios = {},
                           std::uint64_t seed = 0);

/// Seeded shuffle followed by ratio cuts.
SplitResult random_split(const Dataset& dataset, const SplitRatios& ratios,
                         std::uint64_t seed);

/// Cut points used by random_split: round(n * cumulative ratio).
std::array<std::size_t, 2> split_cuts(std::size_t n, const SplitRatios& ratios);

}  // namespace ibio::data
