// SPDX-FileCopyrightText: 2026 instructbio authors
// SPDX-License-Identifier: Apache-2.0

#include "ibio/chem/rings.hpp"

#include <vector>

namespace ibio::chem {

int perceive_rings(MolGraph& graph) {
  const std::size_t n = graph.atom_count();
  for (Atom& a : graph.atoms) a.in_ring = false;
  if (n == 0) return 0;

  std::vector<std::vector<int>> adj = graph.adjacency();
  std::vector<int> parent_atom(n, -1);
  std::vector<int> parent_bond(n, -1);
  std::vector<int> depth(n, -1);
  std::vector<char> bond_in_tree(graph.bond_count(), 0);

  // Iterative DFS building a spanning forest.
  for (std::size_t root = 0; root < n; ++root) {
    if (depth[root] >= 0) continue;
    depth[root] = 0;
    std::vector<int> stack{static_cast<int>(root)};
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      for (int bi : adj[v]) {
        const int u = graph.bonds[bi].other(v);
        if (depth[u] < 0) {
          depth[u] = depth[v] + 1;
          parent_atom[u] = v;
          parent_bond[u] = bi;
          bond_in_tree[bi] = 1;
          stack.push_back(u);
        }
      }
    }
  }

  // Each non-tree edge closes one fundamental cycle; mark the tree path
  // between its endpoints. The union of these cycles covers every atom that
  // lies on any cycle.
  int basis_cycles = 0;
  for (std::size_t bi = 0; bi < graph.bond_count(); ++bi) {
    if (bond_in_tree[bi]) continue;
    ++basis_cycles;
    int a = graph.bonds[bi].a;
    int b = graph.bonds[bi].b;
    graph.atoms[a].in_ring = true;
    graph.atoms[b].in_ring = true;
    while (a != b) {
      if (depth[a] < depth[b]) std::swap(a, b);
      a = parent_atom[a];
      graph.atoms[a].in_ring = true;
    }
  }
  return basis_cycles;
}

}  // namespace ibio::chem
