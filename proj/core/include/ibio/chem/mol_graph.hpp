// SPDX-FileCopyrightText: 2026 instructbio authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ibio::chem {

enum class BondOrder : std::uint8_t { kSingle = 0, kDouble = 1, kTriple = 2, kAromatic = 3 };

/// Numeric order used in valence sums; aromatic counts 1.5.
double bond_order_value(BondOrder order);

struct Atom {
  std::string element;
  int formal_charge = 0;
  bool aromatic = false;
  /// Hydrogens attached to this heavy atom, explicit (bracket) or inferred
  /// from normal valence rules; hydrogens are never graph vertices.
  int explicit_h = 0;
  bool in_ring = false;
  /// Heavy-atom neighbor count, kept consistent with the bond list.
  int degree = 0;
  /// True for bracket atoms, whose hydrogen count is taken verbatim.
  bool from_bracket = false;
};

struct Bond {
  int a = -1;
  int b = -1;
  BondOrder order = BondOrder::kSingle;

  int other(int atom) const { return atom == a ? b : a; }
};

struct MolGraph {
  std::vector<Atom> atoms;
  std::vector<Bond> bonds;
  std::string smiles_source;
  bool multi_fragment = false;

  std::size_t atom_count() const { return atoms.size(); }
  std::size_t bond_count() const { return bonds.size(); }

  /// Bond indices incident to each atom (built on demand by neighbors()).
  std::vector<std::vector<int>> adjacency() const;
};

/// Number of connected components.
int component_count(const MolGraph& graph);

}  // namespace ibio::chem
