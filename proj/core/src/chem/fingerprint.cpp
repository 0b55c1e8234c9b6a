// SPDX-FileCopyrightText: 2026 instructbio authors
// SPDX-License-Identifier: Apache-2.0

#include "ibio/chem/fingerprint.hpp"

#include <algorithm>
#include <bit>

#include "ibio/chem/element.hpp"
#include "ibio/common/error.hpp"
#include "ibio/tensor/rng.hpp"

namespace ibio::chem {

namespace {

std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
  return tk::detail::mix64(h ^ tk::detail::mix64(v));
}

}  // namespace

FingerprintBits::FingerprintBits(int n_bits, int radius)
    : n_bits_(n_bits), radius_(radius), blocks_((n_bits + 63) / 64, 0) {}

void FingerprintBits::set(std::uint64_t bit) {
  blocks_[bit / 64] |= (1ULL << (bit % 64));
}

bool FingerprintBits::test(std::uint64_t bit) const {
  return (blocks_[bit / 64] >> (bit % 64)) & 1ULL;
}

int FingerprintBits::popcount() const {
  int n = 0;
  for (std::uint64_t b : blocks_) n += std::popcount(b);
  return n;
}

FingerprintBits circular_fingerprint(const MolGraph& graph, int radius,
                                     int n_bits) {
  if (n_bits <= 0 || (n_bits & (n_bits - 1)) != 0) {
    raise(ErrorCode::kConfigError,
          "fingerprint width must be a power of two, got " +
              std::to_string(n_bits));
  }
  FingerprintBits bits(n_bits, radius);
  const std::size_t n = graph.atom_count();
  const std::uint64_t mask = static_cast<std::uint64_t>(n_bits) - 1;

  // Round-0 invariant from atom-level properties only.
  std::vector<std::uint64_t> inv(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Atom& a = graph.atoms[i];
    std::uint64_t h = 0x243F6A8885A308D3ULL;
    h = mix(h, static_cast<std::uint64_t>(element_one_hot_index(a.element)));
    h = mix(h, tk::detail::fnv1a(a.element));
    h = mix(h, static_cast<std::uint64_t>(a.degree));
    h = mix(h, static_cast<std::uint64_t>(a.explicit_h));
    h = mix(h, static_cast<std::uint64_t>(a.formal_charge + 16));
    h = mix(h, (a.aromatic ? 2ULL : 0ULL) | (a.in_ring ? 1ULL : 0ULL));
    inv[i] = h;
    bits.set(h & mask);
  }

  std::vector<std::vector<int>> adj = graph.adjacency();
  std::vector<std::uint64_t> next(n);
  for (int r = 1; r <= radius; ++r) {
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<std::uint64_t> env;
      env.reserve(adj[i].size());
      for (int bi : adj[i]) {
        const Bond& b = graph.bonds[bi];
        const int u = b.other(static_cast<int>(i));
        env.push_back(mix(static_cast<std::uint64_t>(b.order) + 1, inv[u]));
      }
      std::sort(env.begin(), env.end());
      std::uint64_t h = mix(0x13198A2E03707344ULL, inv[i]);
      h = mix(h, static_cast<std::uint64_t>(r));
      for (std::uint64_t e : env) h = mix(h, e);
      next[i] = h;
      bits.set(h & mask);
    }
    inv.swap(next);
  }
  return bits;
}

double tanimoto(const FingerprintBits& a, const FingerprintBits& b) {
  if (a.n_bits() != b.n_bits()) {
    raise(ErrorCode::kShapeMismatch, "tanimoto: fingerprint widths differ");
  }
  int both = 0, either = 0;
  for (std::size_t i = 0; i < a.blocks().size(); ++i) {
    both += std::popcount(a.blocks()[i] & b.blocks()[i]);
    either += std::popcount(a.blocks()[i] | b.blocks()[i]);
  }
  return either == 0 ? 0.0 : static_cast<double>(both) / either;
}

}  // namespace ibio::chem
