// SPDX-FileCopyrightText: 2026 instructbio authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ibio::chem {

/// Static element data. The organic subset drives the one-hot feature layout
/// and bare-atom SMILES parsing; other known elements are bracket-only.
struct ElementInfo {
  std::string_view symbol;
  double atomic_weight = 0.0;
  int valence_electrons = 0;
  /// Normal valences used for implicit-hydrogen inference; empty means the
  /// element never receives implicit hydrogens.
  std::vector<int> default_valences;
  bool organic_subset = false;
  bool aromatic_capable = false;
};

/// Case-sensitive lookup by exact symbol ("Cl", "Se", ...).
const ElementInfo* find_element(std::string_view symbol);

/// The 12 organic-subset symbols in one-hot order.
const std::vector<std::string_view>& organic_subset_symbols();

/// Index into the one-hot segment; organic-subset elements map to 0..11,
/// every other known element to 12 ("other").
int element_one_hot_index(std::string_view symbol);
constexpr int kElementOneHotSlots = 13;

/// Mean and population std of the organic-subset atomic weights; the scaled
/// atomic-weight feature is sigmoid((w - mean) / std).
double atomic_weight_mean();
double atomic_weight_std();
double scaled_atomic_weight(double weight);

}  // namespace ibio::chem
