// SPDX-FileCopyrightText: 2026 instructbio authors
// SPDX-License-Identifier: Apache-2.0

#include "ibio/chem/mol_graph.hpp"

#include <vector>

namespace ibio::chem {

double bond_order_value(BondOrder order) {
  switch (order) {
    case BondOrder::kSingle: return 1.0;
    case BondOrder::kDouble: return 2.0;
    case BondOrder::kTriple: return 3.0;
    case BondOrder::kAromatic: return 1.5;
  }
  return 1.0;
}

std::vector<std::vector<int>> MolGraph::adjacency() const {
  std::vector<std::vector<int>> adj(atoms.size());
  for (std::size_t i = 0; i < bonds.size(); ++i) {
    adj[bonds[i].a].push_back(static_cast<int>(i));
    adj[bonds[i].b].push_back(static_cast<int>(i));
  }
  return adj;
}

int component_count(const MolGraph& graph) {
  const std::size_t n = graph.atom_count();
  if (n == 0) return 0;
  std::vector<std::vector<int>> adj = graph.adjacency();
  std::vector<char> seen(n, 0);
  int components = 0;
  std::vector<int> stack;
  for (std::size_t s = 0; s < n; ++s) {
    if (seen[s]) continue;
    ++components;
    stack.push_back(static_cast<int>(s));
    seen[s] = 1;
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      for (int bi : adj[v]) {
        const int u = graph.bonds[bi].other(v);
        if (!seen[u]) {
          seen[u] = 1;
          stack.push_back(u);
        }
      }
    }
  }
  return components;
}

}  // namespace ibio::chem
