// SPDX-FileCopyrightText: 2026 instructbio authors
// SPDX-License-Identifier: Apache-2.0

#include "ibio/chem/smiles_writer.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <set>
#include <vector>

#include "ibio/chem/element.hpp"

namespace ibio::chem {

namespace {

struct Writer {
  const MolGraph& graph;
  tk::RngStream* shuffle;
  std::vector<std::vector<int>> adj;

  // Traversal plan, built first: tree children per atom and back edges.
  std::vector<std::vector<int>> tree_children_bonds;
  std::vector<std::vector<int>> back_bonds;  // incident ring-closure bonds
  std::vector<int> roots;

  std::string out;

  explicit Writer(const MolGraph& g, tk::RngStream* s)
      : graph(g),
        shuffle(s),
        adj(g.adjacency()),
        tree_children_bonds(g.atom_count()),
        back_bonds(g.atom_count()) {}

  void plan() {
    std::vector<char> visited(graph.atom_count(), 0);
    std::vector<char> bond_seen(graph.bond_count(), 0);

    std::vector<int> starts(graph.atom_count());
    for (std::size_t i = 0; i < starts.size(); ++i) starts[i] = static_cast<int>(i);
    if (shuffle) {
      for (std::size_t i = starts.size(); i > 1; --i)
        std::swap(starts[i - 1], starts[shuffle->next_below(i)]);
    }

    for (int s : starts) {
      if (visited[s]) continue;
      roots.push_back(s);
      plan_walk(s, visited, bond_seen);
    }
  }

  void plan_walk(int v, std::vector<char>& visited, std::vector<char>& bond_seen) {
    visited[v] = 1;
    std::vector<int> order = adj[v];
    if (shuffle && order.size() > 1) {
      for (std::size_t i = order.size(); i > 1; --i)
        std::swap(order[i - 1], order[shuffle->next_below(i)]);
    }
    for (int bi : order) {
      if (bond_seen[bi]) continue;
      const int u = graph.bonds[bi].other(v);
      if (visited[u]) {
        bond_seen[bi] = 1;
        back_bonds[v].push_back(bi);
        back_bonds[u].push_back(bi);
        continue;
      }
      bond_seen[bi] = 1;
      tree_children_bonds[v].push_back(bi);
      plan_walk(u, visited, bond_seen);
    }
  }

  static char bond_char(BondOrder o) {
    switch (o) {
      case BondOrder::kSingle: return '-';
      case BondOrder::kDouble: return '=';
      case BondOrder::kTriple: return '#';
      case BondOrder::kAromatic: return ':';
    }
    return '-';
  }

  // Bond symbol, omitting defaults: single between non-aromatic pairs and
  // aromatic between aromatic pairs.
  std::string bond_str(const Bond& b) const {
    const bool both_aromatic =
        graph.atoms[b.a].aromatic && graph.atoms[b.b].aromatic;
    if (b.order == BondOrder::kSingle && !both_aromatic) return "";
    if (b.order == BondOrder::kAromatic && both_aromatic) return "";
    return std::string(1, bond_char(b.order));
  }

  int inferred_h(int idx) const {
    const Atom& a = graph.atoms[idx];
    const ElementInfo* info = find_element(a.element);
    if (!info || !info->organic_subset) return -1;
    double sum = 0.0;
    for (int bi : adj[idx]) sum += bond_order_value(graph.bonds[bi].order);
    const int total = static_cast<int>(std::ceil(sum));
    if (a.aromatic) {
      return std::max(0, info->default_valences.front() - total);
    }
    for (int v : info->default_valences) {
      if (v >= total) return v - total;
    }
    return 0;
  }

  std::string atom_str(int idx) const {
    const Atom& a = graph.atoms[idx];
    const ElementInfo* info = find_element(a.element);
    const bool organic = info && info->organic_subset;
    const bool needs_bracket = !organic || a.formal_charge != 0 ||
                               a.explicit_h != inferred_h(idx);
    std::string sym = a.element;
    if (a.aromatic) {
      for (char& c : sym)
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    if (!needs_bracket) return sym;
    std::string s = "[" + sym;
    if (a.explicit_h == 1) {
      s += "H";
    } else if (a.explicit_h > 1) {
      s += "H" + std::to_string(a.explicit_h);
    }
    if (a.formal_charge > 0) {
      s += "+";
      if (a.formal_charge > 1) s += std::to_string(a.formal_charge);
    } else if (a.formal_charge < 0) {
      s += "-";
      if (a.formal_charge < -1) s += std::to_string(-a.formal_charge);
    }
    return s + "]";
  }

  // Digit management with reuse once a closure is complete.
  std::map<int, int> bond_digit;  // bond index -> digit
  std::set<int> free_digits;
  int high_water = 0;

  int allocate_digit(int bond) {
    int d;
    if (!free_digits.empty()) {
      d = *free_digits.begin();
      free_digits.erase(free_digits.begin());
    } else {
      d = ++high_water;
    }
    bond_digit[bond] = d;
    return d;
  }

  void emit_digit(int d) {
    if (d <= 9) {
      out += std::to_string(d);
    } else {
      out += "%";
      if (d < 10) out += "0";
      out += std::to_string(d);
    }
  }

  void write_walk(int v) {
    out += atom_str(v);
    for (int bi : back_bonds[v]) {
      auto it = bond_digit.find(bi);
      if (it == bond_digit.end()) {
        out += bond_str(graph.bonds[bi]);
        emit_digit(allocate_digit(bi));
      } else {
        const int d = it->second;
        emit_digit(d);
        bond_digit.erase(it);
        free_digits.insert(d);
      }
    }
    const auto& children = tree_children_bonds[v];
    for (std::size_t k = 0; k < children.size(); ++k) {
      const int bi = children[k];
      const int u = graph.bonds[bi].other(v);
      const bool last = k + 1 == children.size();
      if (!last) out += "(";
      out += bond_str(graph.bonds[bi]);
      write_walk(u);
      if (!last) out += ")";
    }
  }

  std::string run() {
    plan();
    bool first = true;
    for (int r : roots) {
      if (!first) out += ".";
      first = false;
      write_walk(r);
    }
    return out;
  }
};

}  // namespace

std::string write_smiles(const MolGraph& graph, tk::RngStream* shuffle) {
  Writer w(graph, shuffle);
  return w.run();
}

}  // namespace ibio::chem
