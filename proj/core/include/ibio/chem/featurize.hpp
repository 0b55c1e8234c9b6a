// SPDX-FileCopyrightText: 2026 instructbio authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "ibio/chem/mol_graph.hpp"

namespace ibio::chem {

enum class Hybridization { kSp = 0, kSp2 = 1, kSp3 = 2, kOther = 3 };

/// Fixed atom-feature layout:
///   [0,13)  element one-hot (organic subset + other)
///   [13,19) heavy-atom degree one-hot, buckets 0..5 (clamped)
///   [19,23) approximate hybridization one-hot {sp, sp2, sp3, other}
///   [23]    aromatic flag
///   [24]    ring flag
///   [25]    scaled atomic weight, sigmoid((w - mean)/std) over the subset
///   [26]    valence electron count
///   [27]    bound hydrogen count
///   [28]    formal charge
constexpr int kAtomFeatureDim = 29;

/// Bond orders map to feature/embedding slots single=0, double=1, triple=2,
/// aromatic=3.
constexpr int kBondKindCount = 4;

/// Hybridization from bond orders: a triple bond or two doubles reads sp, a
/// double or aromatic bond reads sp2, organic-subset default is sp3; elements
/// outside the subset read other.
Hybridization approximate_hybridization(const MolGraph& graph, int atom_index);

/// Feature vector for one atom; requires ring perception to have run.
std::vector<double> featurize_atom(const MolGraph& graph, int atom_index);

/// Row-major [n_atoms x kAtomFeatureDim] features for a whole molecule.
std::vector<double> featurize_graph(const MolGraph& graph);

}  // namespace ibio::chem
