// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <initializer_list>
#include <string_view>

namespace ganeval {

/// SplitMix64 (Steele, Lea, Flood 2014; the seeding generator of
/// xoshiro). State advances by the golden-ratio increment
/// 0x9E3779B97F4A7C15 and each output is passed through the finalizer
///
///   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
///   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
///   z =  z ^ (z >> 31)
///
/// Only 64-bit integer arithmetic is involved, so the stream is identical on
/// every platform and easy to reproduce in other languages.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  std::uint64_t next() noexcept;

  /// Uniform integer in [0, bound) by rejection on the low end (no modulo
  /// bias). bound must be > 0.
  std::uint64_t bounded(std::uint64_t bound) noexcept;

  /// Uniform double in [0, 1) with 53 random bits: (next() >> 11) * 2^-53.
  double uniform() noexcept;

  /// Uniform double in (0, 1]: ((next() >> 11) + 1) * 2^-53.
  double uniform_open_zero() noexcept;

 private:
  std::uint64_t state_;
};

/// The SplitMix64 finalizer on its own.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// 64-bit FNV-1a of a byte string (offset 0xCBF29CE484222325,
/// prime 0x100000001B3).
std::uint64_t fnv1a64(std::string_view bytes) noexcept;

/// Folds a sequence of words into a seed: h = mix64(h ^ mix64(w + i)) per
/// word, starting from h = mix64(base).
std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> words) noexcept;

/// derive_seed(base, {fnv1a64(stream)}); used for the "real"/"fake" streams.
std::uint64_t derive_seed(std::uint64_t base, std::string_view stream) noexcept;

/// Standard normal variates by the Box-Muller transform, returning both
/// values of each pair:
///   r = sqrt(-2 ln u1), u1 in (0,1];  z0 = r cos(2 pi u2), z1 = r sin(2 pi u2)
class NormalSampler {
 public:
  explicit NormalSampler(std::uint64_t seed) noexcept : rng_(seed) {}

  double next() noexcept;

 private:
  SplitMix64 rng_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace ganeval
