// SPDX-License-Identifier: Apache-2.0
#include "ganeval/rng.hpp"

#include <cmath>
#include <numbers>

namespace ganeval {

std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t SplitMix64::next() noexcept {
  state_ += 0x9E3779B97F4A7C15ULL;
  return mix64(state_);
}

std::uint64_t SplitMix64::bounded(std::uint64_t bound) noexcept {
  // Reject the lowest (2^64 mod bound) values so the remainder is uniform.
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    const std::uint64_t r = next();
    if (r >= threshold) return r % bound;
  }
}

double SplitMix64::uniform() noexcept {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

double SplitMix64::uniform_open_zero() noexcept {
  return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;
}

std::uint64_t fnv1a64(std::string_view bytes) noexcept {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> words) noexcept {
  std::uint64_t h = mix64(base);
  std::uint64_t i = 0;
  for (std::uint64_t w : words) {
    h = mix64(h ^ mix64(w + i));
    ++i;
  }
  return h;
}

std::uint64_t derive_seed(std::uint64_t base, std::string_view stream) noexcept {
  return derive_seed(base, {fnv1a64(stream)});
}

double NormalSampler::next() noexcept {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = rng_.uniform_open_zero();
  const double u2 = rng_.uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(theta);
  has_spare_ = true;
  return r * std::cos(theta);
}

}  // namespace ganeval
