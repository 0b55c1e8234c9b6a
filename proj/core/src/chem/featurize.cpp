// SPDX-FileCopyrightText: 2026 instructbio authors
// SPDX-License-Identifier: Apache-2.0

#include "ibio/chem/featurize.hpp"

#include <algorithm>

#include "ibio/chem/element.hpp"
#include "ibio/common/error.hpp"

namespace ibio::chem {

Hybridization approximate_hybridization(const MolGraph& graph, int atom_index) {
  const Atom& atom = graph.atoms[atom_index];
  if (element_one_hot_index(atom.element) == kElementOneHotSlots - 1) {
    return Hybridization::kOther;
  }
  int doubles = 0;
  bool triple = false;
  bool aromatic = atom.aromatic;
  for (const Bond& b : graph.bonds) {
    if (b.a != atom_index && b.b != atom_index) continue;
    if (b.order == BondOrder::kTriple) triple = true;
    if (b.order == BondOrder::kDouble) ++doubles;
    if (b.order == BondOrder::kAromatic) aromatic = true;
  }
  if (triple || doubles >= 2) return Hybridization::kSp;
  if (doubles == 1 || aromatic) return Hybridization::kSp2;
  return Hybridization::kSp3;
}

std::vector<double> featurize_atom(const MolGraph& graph, int atom_index) {
  if (atom_index < 0 ||
      static_cast<std::size_t>(atom_index) >= graph.atom_count()) {
    raise(ErrorCode::kShapeMismatch,
          "atom index " + std::to_string(atom_index) + " out of range");
  }
  const Atom& atom = graph.atoms[atom_index];
  const ElementInfo* info = find_element(atom.element);

  std::vector<double> f(kAtomFeatureDim, 0.0);
  f[element_one_hot_index(atom.element)] = 1.0;
  f[13 + std::min(atom.degree, 5)] = 1.0;
  f[19 + static_cast<int>(approximate_hybridization(graph, atom_index))] = 1.0;
  f[23] = atom.aromatic ? 1.0 : 0.0;
  f[24] = atom.in_ring ? 1.0 : 0.0;
  f[25] = scaled_atomic_weight(info->atomic_weight);
  f[26] = static_cast<double>(info->valence_electrons);
  f[27] = static_cast<double>(atom.explicit_h);
  f[28] = static_cast<double>(atom.formal_charge);
  return f;
}

std::vector<double> featurize_graph(const MolGraph& graph) {
  std::vector<double> out;
  out.reserve(graph.atom_count() * kAtomFeatureDim);
  for (std::size_t i = 0; i < graph.atom_count(); ++i) {
    const std::vector<double> f = featurize_atom(graph, static_cast<int>(i));
    out.insert(out.end(), f.begin(), f.end());
  }
  return out;
}

}  // namespace ibio::chem
