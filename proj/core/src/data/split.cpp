// SPDX-FileCopyrightText: 2026 instructbio authors
// SPDX-License-Identifier: Apache-2.0

#include "ibio/data/split.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "ibio/chem/scaffold.hpp"
#include "ibio/common/error.hpp"
#include "ibio/tensor/rng.hpp"

namespace ibio::data {

namespace {

void check_ratios(const SplitRatios& r) {
  if (r.train < 0 || r.val < 0 || r.test < 0 ||
      std::fabs(r.train + r.val + r.test - 1.0) > 1e-9) {
    raise(ErrorCode::kConfigError, "split ratios must be >= 0 and sum to 1");
  }
}

}  // namespace

std::array<std::size_t, 2> split_cuts(std::size_t n, const SplitRatios& ratios) {
  const auto cut1 = static_cast<std::size_t>(
      std::llround(ratios.train * static_cast<double>(n)));
  const auto cut2 = static_cast<std::size_t>(
      std::llround((ratios.train + ratios.val) * static_cast<double>(n)));
  return {std::min(cut1, n), std::min(std::max(cut1, cut2), n)};
}

SplitResult scaffold_split(const Dataset& dataset, const SplitRatios& ratios,
                           std::uint64_t /*seed*/) {
  check_ratios(ratios);

  // Group sample indices by scaffold key (map gives lexicographic key order).
  std::map<std::string, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < dataset.samples.size(); ++i) {
    groups[chem::scaffold_key(dataset.samples[i].graph)].push_back(i);
  }

  std::vector<const std::vector<std::size_t>*> ordered;
  std::vector<std::string> keys;
  for (auto& [key, members] : groups) {
    ordered.push_back(&members);
    keys.push_back(key);
  }
  std::vector<std::size_t> order(ordered.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     if (ordered[a]->size() != ordered[b]->size())
                       return ordered[a]->size() > ordered[b]->size();
                     return keys[a] < keys[b];
                   });

  const double n = static_cast<double>(dataset.samples.size());
  const std::array<double, 3> target = {ratios.train * n, ratios.val * n,
                                        ratios.test * n};
  std::array<double, 3> filled = {0.0, 0.0, 0.0};
  std::array<std::vector<std::size_t>, 3> member_idx;

  for (std::size_t gi : order) {
    // Lowest fill fraction wins; a zero-ratio split never receives groups.
    int best = -1;
    double best_frac = 0.0;
    for (int s = 0; s < 3; ++s) {
      if (target[s] <= 0.0) continue;
      const double frac = filled[s] / target[s];
      if (best < 0 || frac < best_frac - 1e-12) {
        best = s;
        best_frac = frac;
      }
    }
    if (best < 0) best = 0;
    filled[best] += static_cast<double>(ordered[gi]->size());
    for (std::size_t i : *ordered[gi]) member_idx[best].push_back(i);
  }

  SplitResult out;
  Dataset* dsts[3] = {&out.train, &out.val, &out.test};
  for (int s = 0; s < 3; ++s) {
    dsts[s]->task = dataset.task;
    dsts[s]->label_columns = dataset.label_columns;
    std::sort(member_idx[s].begin(), member_idx[s].end());
    for (std::size_t i : member_idx[s])
      dsts[s]->samples.push_back(dataset.samples[i]);
  }
  return out;
}

SplitResult random_split(const Dataset& dataset, const SplitRatios& ratios,
                         std::uint64_t seed) {
  check_ratios(ratios);
  std::vector<std::size_t> idx(dataset.samples.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  tk::RngStream stream = tk::SeededRng(seed).stream("split/random");
  for (std::size_t i = idx.size(); i > 1; --i) {
    std::swap(idx[i - 1], idx[stream.next_below(i)]);
  }
  const auto cuts = split_cuts(idx.size(), ratios);

  SplitResult out;
  Dataset* dsts[3] = {&out.train, &out.val, &out.test};
  for (Dataset* d : dsts) {
    d->task = dataset.task;
    d->label_columns = dataset.label_columns;
  }
  for (std::size_t i = 0; i < idx.size(); ++i) {
    Dataset* dst = i < cuts[0] ? &out.train : (i < cuts[1] ? &out.val : &out.test);
    dst->samples.push_back(dataset.samples[idx[i]]);
  }
  return out;
}

}  // namespace ibio::data
