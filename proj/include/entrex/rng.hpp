#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <string_view>

#include <boost/random/binomial_distribution.hpp>
#include <boost/random/normal_distribution.hpp>

namespace entrex {

/// SplitMix64 finalizer. Used both to expand seeds and to derive child seeds.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Stable 64-bit FNV-1a hash, used to turn experiment names into stream ids.
constexpr std::uint64_t fnv1a64(std::string_view s) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// Split rule: the child seed of `parent` at `index` is
///   mix64(parent ^ mix64(index + golden)).
/// Every random quantity in the toolkit is reached through a chain of such
/// splits from the master seed, so results never depend on scheduling.
constexpr std::uint64_t derive_seed(std::uint64_t parent,
                                    std::uint64_t index) noexcept {
  return mix64(parent ^ mix64(index + 0x9e3779b97f4a7c15ULL));
}

/// xoshiro256** engine. Satisfies UniformRandomBitGenerator.
class Xoshiro256 {
 public:
  using result_type = std::uint64_t;

  explicit Xoshiro256(std::uint64_t seed) noexcept {
    std::uint64_t sm = seed;
    for (auto& word : s_) {
      sm += 0x9e3779b97f4a7c15ULL;
      word = mix64(sm);
    }
  }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() noexcept {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  friend bool operator==(const Xoshiro256&, const Xoshiro256&) = default;

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
    return (x << k) | (x >> (64 - k));
  }
  std::uint64_t s_[4];
};

/// A seeded random stream. Copyable; a copy replays the same sequence.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) noexcept : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const noexcept { return seed_; }

  /// Independent child stream; depends only on (seed, index).
  RngStream split(std::uint64_t index) const noexcept {
    return RngStream(derive_seed(seed_, index));
  }
  RngStream split(std::string_view name) const noexcept {
    return split(fnv1a64(name));
  }

  std::uint64_t bits() noexcept { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Uniform on (0, 1).
  double uniform_open() noexcept {
    return (static_cast<double>(engine_() >> 12) + 0.5) * 0x1.0p-52;
  }

  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) noexcept {
    __extension__ using u128 = unsigned __int128;
    return static_cast<std::uint64_t>((static_cast<u128>(engine_()) * n) >> 64);
  }

  /// Standard normal (Boost's ziggurat sampler).
  double normal() { return boost::random::normal_distribution<double>()(engine_); }

  /// Binomial(n, p) count.
  std::int64_t binomial(std::int64_t n, double p) {
    return boost::random::binomial_distribution<std::int64_t, double>(n, p)(engine_);
  }

  Xoshiro256& engine() noexcept { return engine_; }

 private:
  std::uint64_t seed_;
  Xoshiro256 engine_;
};

}  // namespace entrex
