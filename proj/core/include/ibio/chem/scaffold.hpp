// SPDX-FileCopyrightText: 2026 instructbio authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>

#include "ibio/chem/mol_graph.hpp"

namespace ibio::chem {

/// Canonical key of the ring-and-linker skeleton: side chains (degree-1 atoms
/// outside every ring) are pruned to a fixpoint and the remainder is encoded
/// canonically via invariant refinement plus a lexicographically minimal
/// labeling. Acyclic molecules yield the empty key. Two SMILES renderings of
/// one molecule always agree; aromatic and aliphatic rings differ.
std::string scaffold_key(const MolGraph& graph);

}  // namespace ibio::chem
