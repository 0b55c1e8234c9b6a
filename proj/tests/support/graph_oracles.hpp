// SPDX-FileCopyrightText: 2026 instructbio authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <functional>
#include <numeric>
#include <vector>

#include "ibio/chem/mol_graph.hpp"

namespace testsupport {

/// Brute-force labeled-graph isomorphism for small molecules: backtracking
/// over atom assignments with element/charge/aromatic labels and exact bond
/// orders. Intended for graphs of at most ~12 atoms.
inline bool brute_force_isomorphic(const ibio::chem::MolGraph& a,
                                   const ibio::chem::MolGraph& b) {
  using ibio::chem::BondOrder;
  const std::size_t n = a.atom_count();
  if (n != b.atom_count() || a.bond_count() != b.bond_count()) return false;

  auto label_ok = [&](int ia, int ib) {
    const auto& x = a.atoms[ia];
    const auto& y = b.atoms[ib];
    return x.element == y.element && x.aromatic == y.aromatic &&
           x.formal_charge == y.formal_charge && x.degree == y.degree &&
           x.explicit_h == y.explicit_h;
  };

  // Adjacency with bond orders.
  auto adj = [](const ibio::chem::MolGraph& g) {
    std::vector<std::vector<int>> m(g.atom_count(),
                                    std::vector<int>(g.atom_count(), -1));
    for (const auto& bond : g.bonds) {
      m[bond.a][bond.b] = static_cast<int>(bond.order);
      m[bond.b][bond.a] = static_cast<int>(bond.order);
    }
    return m;
  };
  const auto ma = adj(a);
  const auto mb = adj(b);

  std::vector<int> map(n, -1);
  std::vector<char> used(n, 0);

  std::function<bool(std::size_t)> extend = [&](std::size_t i) -> bool {
    if (i == n) return true;
    for (std::size_t j = 0; j < n; ++j) {
      if (used[j] || !label_ok(static_cast<int>(i), static_cast<int>(j)))
        continue;
      bool ok = true;
      for (std::size_t k = 0; k < i; ++k) {
        if (ma[i][k] != mb[j][map[k]]) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      map[i] = static_cast<int>(j);
      used[j] = 1;
      if (extend(i + 1)) return true;
      used[j] = 0;
      map[i] = -1;
    }
    return false;
  };
  return extend(0);
}

}  // namespace testsupport
