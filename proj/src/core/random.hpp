#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

// Portable random streams. Every generator and distribution here is
// implemented locally so that a (seed, stream) pair produces the same
// variates on every platform; std:: distributions are implementation-defined.

namespace margadj::rng {

/// SplitMix64 finalizer: a bijective 64-bit mixer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

class SplitMix64 {
 public:
  explicit constexpr SplitMix64(std::uint64_t state) noexcept : state_(state) {}
  constexpr std::uint64_t next() noexcept { return mix64(state_ += 0x9E3779B97F4A7C15ULL); }

 private:
  std::uint64_t state_;
};

/// xoshiro256** (Blackman & Vigna). Satisfies UniformRandomBitGenerator.
class Xoshiro256 {
 public:
  using result_type = std::uint64_t;

  explicit Xoshiro256(std::uint64_t seed) noexcept {
    SplitMix64 sm(seed);
    for (auto& w : s_) w = sm.next();
  }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

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

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
    return (x << k) | (x >> (64 - k));
  }
  std::uint64_t s_[4];
};

/// Seed for an independent stream addressed by (seed, a, b). Pure function of
/// its arguments: grid cell `a`, replication `b` always map to the same key,
/// whatever thread evaluates them.
constexpr std::uint64_t stream_key(std::uint64_t seed, std::uint64_t a, std::uint64_t b) noexcept {
  std::uint64_t k = mix64(seed ^ 0x6A09E667F3BCC909ULL);
  k = mix64(k ^ (a * 0x9E3779B97F4A7C15ULL + 0xBB67AE8584CAA73BULL));
  k = mix64(k ^ (b * 0xD1B54A32D192ED03ULL + 0x3C6EF372FE94F82BULL));
  return k;
}

/// Binomial(trials, p). Inversion for small means, BTRD (Hoermann 1993) otherwise.
std::int64_t binomial(Xoshiro256& gen, std::int64_t trials, double p);

/// Multinomial(total, probs) by the conditional-binomial method, cells visited
/// in the given order. probs must be nonnegative and sum to (about) one.
void multinomial(Xoshiro256& gen, std::int64_t total, std::span<const double> probs,
                 std::span<std::int64_t> out);

/// Categorical draw by inversion over cumulative probabilities (last bin absorbs
/// rounding). Returns a 0-based index.
std::size_t categorical(Xoshiro256& gen, std::span<const double> cumulative);

std::vector<double> cumulative(std::span<const double> probs);

}  // namespace margadj::rng
