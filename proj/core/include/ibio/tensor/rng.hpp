// SPDX-FileCopyrightText: 2026 instructbio authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>

namespace ibio::tk {

namespace detail {

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

// splitmix64 finalizer; the workhorse mixer for all streams.
inline constexpr std::uint64_t mix64(std::uint64_t x) {
  x += kGolden;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

inline constexpr std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001B3ULL;
  }
  return h;
}

}  // namespace detail

/// Counter-based random stream. Output i is a pure function of (key, i), so a
/// stream is stateless apart from its cursor and two streams with distinct
/// keys never interact, no matter how many values either one consumes.
class RngStream {
 public:
  RngStream() = default;
  explicit RngStream(std::uint64_t key) : key_(key) {}

  std::uint64_t key() const { return key_; }

  std::uint64_t at(std::uint64_t index) const {
    return detail::mix64(key_ ^ (index * detail::kGolden + 1));
  }

  std::uint64_t next_u64() { return at(cursor_++); }

  /// Uniform double in [0, 1).
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  /// Standard normal via Box-Muller (pairs cached).
  double next_normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    do {
      u1 = next_double();
    } while (u1 <= 0.0);
    const double u2 = next_double();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 6.28318530717958647692 * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
  }

  /// Uniform integer in [0, n). n must be > 0.
  std::uint64_t next_below(std::uint64_t n) { return next_u64() % n; }

 private:
  std::uint64_t key_ = 0;
  std::uint64_t cursor_ = 0;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

/// Root generator: a 64-bit seed that can be split into independent labelled
/// streams. Identical (seed, label, a, b) always yields an identical stream.
class SeededRng {
 public:
  SeededRng() = default;
  explicit SeededRng(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t seed() const { return seed_; }

  RngStream stream(std::string_view label, std::uint64_t a = 0,
                   std::uint64_t b = 0) const {
    std::uint64_t k = detail::mix64(seed_ ^ detail::fnv1a(label));
    k = detail::mix64(k ^ (a + 1));
    k = detail::mix64(k ^ detail::mix64(b + 2));
    return RngStream(k);
  }

 private:
  std::uint64_t seed_ = 0;
};

}  // namespace ibio::tk
