// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <string_view>

namespace irbench {

// Seeded generator with platform-stable output. The engine is
// std::mt19937_64 (fully specified by the standard); range reduction is done
// here because the std distributions are implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform in [0, bound). bound must be > 0.
  std::uint64_t below(std::uint64_t bound);

  // Uniform in [lo, hi].
  std::int64_t between(std::int64_t lo, std::int64_t hi);

  bool chance(std::uint32_t numerator, std::uint32_t denominator) {
    return below(denominator) < numerator;
  }

  template <typename T>
  const T& pick(std::span<const T> items) {
    return items[below(items.size())];
  }

  // Lowercase hex string of `n` characters.
  std::string hex(std::size_t n);

  // Characters drawn from `alphabet`.
  std::string chars(std::string_view alphabet, std::size_t n);

 private:
  std::mt19937_64 engine_;
};

// FNV-1a, 64 bit. Used to fan a single seed out to per-case seeds.
std::uint64_t stable_hash(std::string_view text, std::uint64_t basis = 0xcbf29ce484222325ULL);

// splitmix64 finalizer; a cheap bijective mixer for deriving sub-seeds.
std::uint64_t mix64(std::uint64_t x);

// Version-4 shaped UUID built from 128 caller-supplied bits.
std::string uuid_from(std::uint64_t hi, std::uint64_t lo);

}  // namespace irbench
