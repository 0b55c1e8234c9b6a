// SPDX-FileCopyrightText: 2026 instructbio authors
// SPDX-License-Identifier: Apache-2.0

#include "ibio/models/graph_batch.hpp"

#include <algorithm>
#include <numeric>

#include "ibio/common/error.hpp"

namespace ibio::models {

GraphBatch GraphBatch::build(const std::vector<const chem::MolGraph*>& graphs) {
  if (graphs.empty()) {
    raise(ErrorCode::kEmptyBatch, "GraphBatch needs at least one graph");
  }
  GraphBatch batch;
  batch.n_graphs = static_cast<int>(graphs.size());

  std::size_t total_atoms = 0;
  for (const chem::MolGraph* g : graphs) total_atoms += g->atom_count();
  batch.atom_features = tk::Tensor({total_atoms, static_cast<std::size_t>(
                                                     chem::kAtomFeatureDim)});
  batch.graph_id.reserve(total_atoms);

  struct DirectedEdge {
    int src, dst, kind;
  };
  std::vector<DirectedEdge> edges;

  std::size_t atom_offset = 0;
  for (int gi = 0; gi < batch.n_graphs; ++gi) {
    const chem::MolGraph& g = *graphs[gi];
    const std::vector<double> feats = chem::featurize_graph(g);
    std::copy(feats.begin(), feats.end(),
              batch.atom_features.data() + atom_offset * chem::kAtomFeatureDim);
    for (std::size_t a = 0; a < g.atom_count(); ++a) batch.graph_id.push_back(gi);
    for (const chem::Bond& b : g.bonds) {
      const int u = static_cast<int>(atom_offset) + b.a;
      const int v = static_cast<int>(atom_offset) + b.b;
      const int kind = static_cast<int>(b.order);
      edges.push_back({u, v, kind});
      edges.push_back({v, u, kind});
    }
    atom_offset += g.atom_count();
  }

  std::sort(edges.begin(), edges.end(), [](const DirectedEdge& a,
                                           const DirectedEdge& b) {
    if (a.dst != b.dst) return a.dst < b.dst;
    return a.src < b.src;
  });
  batch.edge_src.reserve(edges.size());
  batch.edge_dst.reserve(edges.size());
  batch.edge_kind.reserve(edges.size());
  for (const DirectedEdge& e : edges) {
    batch.edge_src.push_back(e.src);
    batch.edge_dst.push_back(e.dst);
    batch.edge_kind.push_back(e.kind);
  }
  return batch;
}

}  // namespace ibio::models
