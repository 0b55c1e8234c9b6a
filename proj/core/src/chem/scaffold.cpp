// SPDX-FileCopyrightText: 2026 instructbio authors
// SPDX-License-Identifier: Apache-2.0

#include "ibio/chem/scaffold.hpp"

#include <algorithm>
#include <cstdint>
#include <vector>

#include "ibio/tensor/rng.hpp"

namespace ibio::chem {

namespace {

std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
  return tk::detail::mix64(h ^ tk::detail::mix64(v));
}

struct Skeleton {
  struct SAtom {
    std::string element;
    bool aromatic = false;
    int charge = 0;
  };
  struct SBond {
    int a, b;
    BondOrder order;
  };
  std::vector<SAtom> atoms;
  std::vector<SBond> bonds;
  std::vector<std::vector<int>> adj;  // bond indices per atom

  void build_adj() {
    adj.assign(atoms.size(), {});
    for (std::size_t i = 0; i < bonds.size(); ++i) {
      adj[bonds[i].a].push_back(static_cast<int>(i));
      adj[bonds[i].b].push_back(static_cast<int>(i));
    }
  }
};

// Iteratively strip non-ring atoms of degree <= 1; what survives is the
// ring-and-linker skeleton.
Skeleton prune_to_skeleton(const MolGraph& graph) {
  const std::size_t n = graph.atom_count();
  std::vector<char> alive(n, 1);
  std::vector<int> degree(n, 0);
  for (const Bond& b : graph.bonds) {
    ++degree[b.a];
    ++degree[b.b];
  }
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      if (!alive[i] || graph.atoms[i].in_ring || degree[i] > 1) continue;
      alive[i] = 0;
      changed = true;
      for (const Bond& b : graph.bonds) {
        if (b.a == static_cast<int>(i) && alive[b.b]) --degree[b.b];
        if (b.b == static_cast<int>(i) && alive[b.a]) --degree[b.a];
      }
      degree[i] = 0;
    }
  }
  Skeleton sk;
  std::vector<int> remap(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    if (!alive[i]) continue;
    remap[i] = static_cast<int>(sk.atoms.size());
    sk.atoms.push_back({graph.atoms[i].element, graph.atoms[i].aromatic,
                        graph.atoms[i].formal_charge});
  }
  for (const Bond& b : graph.bonds) {
    if (alive[b.a] && alive[b.b]) {
      sk.bonds.push_back({remap[b.a], remap[b.b], b.order});
    }
  }
  sk.build_adj();
  return sk;
}

char bond_char(BondOrder o) {
  switch (o) {
    case BondOrder::kSingle: return '-';
    case BondOrder::kDouble: return '=';
    case BondOrder::kTriple: return '#';
    case BondOrder::kAromatic: return ':';
  }
  return '-';
}

class Canonicalizer {
 public:
  explicit Canonicalizer(const Skeleton& sk) : sk_(sk), n_(sk.atoms.size()) {}

  std::string run() {
    std::vector<std::uint64_t> inv(n_);
    for (std::size_t i = 0; i < n_; ++i) {
      std::uint64_t h = tk::detail::fnv1a(sk_.atoms[i].element);
      h = mix(h, sk_.atoms[i].aromatic ? 3ULL : 5ULL);
      h = mix(h, static_cast<std::uint64_t>(sk_.atoms[i].charge + 16));
      inv[i] = h;
    }
    refine(inv);
    best_.clear();
    leaves_ = 0;
    search(inv);
    return best_;
  }

 private:
  // Morgan/1-WL refinement: fold sorted neighborhood signatures into each
  // invariant until the number of classes stops growing.
  void refine(std::vector<std::uint64_t>& inv) const {
    std::size_t classes = count_classes(inv);
    for (std::size_t iter = 0; iter < n_ + 1; ++iter) {
      std::vector<std::uint64_t> next(n_);
      for (std::size_t i = 0; i < n_; ++i) {
        std::vector<std::uint64_t> env;
        env.reserve(sk_.adj[i].size());
        for (int bi : sk_.adj[i]) {
          const auto& b = sk_.bonds[bi];
          const int u = b.a == static_cast<int>(i) ? b.b : b.a;
          env.push_back(mix(static_cast<std::uint64_t>(b.order) + 7, inv[u]));
        }
        std::sort(env.begin(), env.end());
        std::uint64_t h = mix(0x452821E638D01377ULL, inv[i]);
        for (std::uint64_t e : env) h = mix(h, e);
        next[i] = h;
      }
      const std::size_t next_classes = count_classes(next);
      inv.swap(next);
      if (next_classes == classes) break;
      classes = next_classes;
    }
  }

  static std::size_t count_classes(const std::vector<std::uint64_t>& inv) {
    std::vector<std::uint64_t> sorted = inv;
    std::sort(sorted.begin(), sorted.end());
    return std::unique(sorted.begin(), sorted.end()) - sorted.begin();
  }

  // Individualization-refinement: branch on the first non-singleton class and
  // keep the lexicographically smallest encoding over all branches.
  void search(const std::vector<std::uint64_t>& inv) {
    if (leaves_ > kMaxLeaves) return;

    // Order classes by invariant value; atoms within a class are ambiguous.
    std::vector<std::size_t> order(n_);
    for (std::size_t i = 0; i < n_; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return inv[a] < inv[b];
    });

    int branch_atom_class_start = -1;
    for (std::size_t k = 0; k + 1 < n_; ++k) {
      if (inv[order[k]] == inv[order[k + 1]]) {
        branch_atom_class_start = static_cast<int>(k);
        break;
      }
    }

    if (branch_atom_class_start < 0) {
      ++leaves_;
      std::string enc = encode(order);
      if (best_.empty() || enc < best_) best_ = std::move(enc);
      return;
    }

    const std::uint64_t cls = inv[order[branch_atom_class_start]];
    for (std::size_t k = branch_atom_class_start; k < n_; ++k) {
      if (inv[order[k]] != cls) break;
      std::vector<std::uint64_t> child = inv;
      child[order[k]] = mix(child[order[k]], 0xC0FFEEULL);
      refine(child);
      search(child);
      if (leaves_ > kMaxLeaves) return;
    }
  }

  std::string encode(const std::vector<std::size_t>& order) const {
    std::vector<int> rank(n_);
    for (std::size_t k = 0; k < n_; ++k) rank[order[k]] = static_cast<int>(k);

    std::string s;
    s.reserve(n_ * 4 + sk_.bonds.size() * 8);
    for (std::size_t k = 0; k < n_; ++k) {
      const auto& a = sk_.atoms[order[k]];
      s += a.element;
      s += a.aromatic ? 'a' : 'A';
      if (a.charge != 0) s += std::to_string(a.charge);
      s += ' ';
    }
    std::vector<std::string> edges;
    edges.reserve(sk_.bonds.size());
    for (const auto& b : sk_.bonds) {
      const int lo = std::min(rank[b.a], rank[b.b]);
      const int hi = std::max(rank[b.a], rank[b.b]);
      edges.push_back(std::to_string(lo) + bond_char(b.order) +
                      std::to_string(hi));
    }
    std::sort(edges.begin(), edges.end());
    s += ';';
    for (const std::string& e : edges) {
      s += e;
      s += ',';
    }
    return s;
  }

  static constexpr long kMaxLeaves = 20000;

  const Skeleton& sk_;
  std::size_t n_;
  std::string best_;
  long leaves_ = 0;
};

}  // namespace

std::string scaffold_key(const MolGraph& graph) {
  const Skeleton sk = prune_to_skeleton(graph);
  if (sk.atoms.empty()) return "";
  Canonicalizer canon(sk);
  return canon.run();
}

}  // namespace ibio::chem
