// SPDX-FileCopyrightText: 2026 instructbio authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

#include "ibio/chem/mol_graph.hpp"

namespace ibio::chem {

/// Fixed-width fingerprint bitset.
class FingerprintBits {
 public:
  FingerprintBits() = default;
  FingerprintBits(int n_bits, int radius);

  int n_bits() const { return n_bits_; }
  int radius() const { return radius_; }

  void set(std::uint64_t bit);
  bool test(std::uint64_t bit) const;
  int popcount() const;

  const std::vector<std::uint64_t>& blocks() const { return blocks_; }

  bool operator==(const FingerprintBits& other) const {
    return n_bits_ == other.n_bits_ && blocks_ == other.blocks_;
  }

 private:
  int n_bits_ = 0;
  int radius_ = 0;
  std::vector<std::uint64_t> blocks_;
};

/// Morgan-style circular fingerprint: iterative neighborhood hashing for
/// r = 0..radius; every environment hash sets bit (hash mod n_bits). The atom
/// invariants are order-independent, so two renderings of the same molecule
/// produce identical bitsets. n_bits must be a power of two.
FingerprintBits circular_fingerprint(const MolGraph& graph, int radius,
                                     int n_bits);

/// Tanimoto similarity |a AND b| / |a OR b|; 0 when both sets are empty.
double tanimoto(const FingerprintBits& a, const FingerprintBits& b);

}  // namespace ibio::chem
