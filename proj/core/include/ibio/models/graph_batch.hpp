// SPDX-FileCopyrightText: 2026 instructbio authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "ibio/chem/featurize.hpp"
#include "ibio/chem/mol_graph.hpp"
#include "ibio/tensor/tensor.hpp"

namespace ibio::models {

/// Batched molecular graphs: concatenated atom features, directed edges
/// sorted by destination (the segment-sum layout), and per-atom graph ids.
struct GraphBatch {
  tk::Tensor atom_features;    // [n_atoms, kAtomFeatureDim]
  std::vector<int> graph_id;   // per atom, ascending and contiguous
  std::vector<int> edge_src;   // directed, both directions per bond
  std::vector<int> edge_dst;   // sorted ascending
  std::vector<int> edge_kind;  // bond-order slot per directed edge
  int n_graphs = 0;

  std::size_t n_atoms() const { return graph_id.size(); }

  /// Throws EmptyBatch when graphs is empty.
  static GraphBatch build(const std::vector<const chem::MolGraph*>& graphs);
};

}  // namespace ibio::models
