// SPDX-FileCopyrightText: 2026 instructbio authors
// SPDX-License-Identifier: Apache-2.0

#include "ibio/chem/element.hpp"

#include <cmath>
#include <unordered_map>

namespace ibio::chem {

namespace {

// Organic subset first, in one-hot order.
const std::vector<ElementInfo>& table() {
  static const std::vector<ElementInfo> t = {
      {"B", 10.811, 3, {3}, true, true},
      {"C", 12.011, 4, {4}, true, true},
      {"N", 14.007, 5, {3, 5}, true, true},
      {"O", 15.999, 6, {2}, true, true},
      {"P", 30.974, 5, {3, 5}, true, true},
      {"S", 32.06, 6, {2, 4, 6}, true, true},
      {"F", 18.998, 7, {1}, true, false},
      {"Cl", 35.45, 7, {1}, true, false},
      {"Br", 79.904, 7, {1}, true, false},
      {"I", 126.904, 7, {1}, true, false},
      {"Si", 28.085, 4, {4}, true, true},
      {"Se", 78.971, 6, {2, 4, 6}, true, true},
      // Bracket-only elements (no implicit hydrogens).
      {"H", 1.008, 1, {}, false, false},
      {"Li", 6.94, 1, {}, false, false},
      {"Be", 9.012, 2, {}, false, false},
      {"Na", 22.990, 1, {}, false, false},
      {"Mg", 24.305, 2, {}, false, false},
      {"Al", 26.982, 3, {}, false, false},
      {"K", 39.098, 1, {}, false, false},
      {"Ca", 40.078, 2, {}, false, false},
      {"Ti", 47.867, 4, {}, false, false},
      {"Cr", 51.996, 6, {}, false, false},
      {"Mn", 54.938, 7, {}, false, false},
      {"Fe", 55.845, 8, {}, false, false},
      {"Co", 58.933, 9, {}, false, false},
      {"Ni", 58.693, 10, {}, false, false},
      {"Cu", 63.546, 11, {}, false, false},
      {"Zn", 65.38, 12, {}, false, false},
      {"Ga", 69.723, 3, {}, false, false},
      {"Ge", 72.630, 4, {}, false, false},
      {"As", 74.922, 5, {}, false, true},
      {"Ag", 107.868, 11, {}, false, false},
      {"Sn", 118.710, 4, {}, false, false},
      {"Sb", 121.760, 5, {}, false, false},
      {"Te", 127.60, 6, {}, false, true},
      {"Ba", 137.327, 2, {}, false, false},
      {"Pt", 195.084, 10, {}, false, false},
      {"Au", 196.967, 11, {}, false, false},
      {"Hg", 200.592, 12, {}, false, false},
      {"Pb", 207.2, 4, {}, false, false},
      {"Bi", 208.980, 5, {}, false, false},
  };
  return t;
}

const std::unordered_map<std::string_view, const ElementInfo*>& index() {
  static const auto* m = [] {
    auto* map = new std::unordered_map<std::string_view, const ElementInfo*>();
    for (const ElementInfo& e : table()) map->emplace(e.symbol, &e);
    return map;
  }();
  return *m;
}

}  // namespace

const ElementInfo* find_element(std::string_view symbol) {
  auto it = index().find(symbol);
  return it == index().end() ? nullptr : it->second;
}

const std::vector<std::string_view>& organic_subset_symbols() {
  static const std::vector<std::string_view> s = [] {
    std::vector<std::string_view> out;
    for (const ElementInfo& e : table())
      if (e.organic_subset) out.push_back(e.symbol);
    return out;
  }();
  return s;
}

int element_one_hot_index(std::string_view symbol) {
  const auto& subset = organic_subset_symbols();
  for (std::size_t i = 0; i < subset.size(); ++i)
    if (subset[i] == symbol) return static_cast<int>(i);
  return kElementOneHotSlots - 1;
}

double atomic_weight_mean() {
  static const double mean = [] {
    double s = 0.0;
    int n = 0;
    for (const ElementInfo& e : table()) {
      if (!e.organic_subset) continue;
      s += e.atomic_weight;
      ++n;
    }
    return s / n;
  }();
  return mean;
}

double atomic_weight_std() {
  static const double sd = [] {
    const double mu = atomic_weight_mean();
    double s = 0.0;
    int n = 0;
    for (const ElementInfo& e : table()) {
      if (!e.organic_subset) continue;
      s += (e.atomic_weight - mu) * (e.atomic_weight - mu);
      ++n;
    }
    return std::sqrt(s / n);
  }();
  return sd;
}

double scaled_atomic_weight(double weight) {
  const double z = (weight - atomic_weight_mean()) / atomic_weight_std();
  return 1.0 / (1.0 + std::exp(-z));
}

}  // namespace ibio::chem
