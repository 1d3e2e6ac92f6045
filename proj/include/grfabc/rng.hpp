#pragma once

// Splittable deterministic randomness. Every simulated proposal draws from
// its own stream keyed by (family seed, proposal index), so results do not
// depend on how work is split across threads.

#include <cstdint>
#include <limits>
#include <string_view>

namespace grfabc {

std::uint64_t splitmix64(std::uint64_t& state) noexcept;

/// Mixes a tag into a seed, e.g. derive_seed(seed, "toy/run/17"). Stable
/// across platforms and compilers.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view tag) noexcept;

/// xoshiro256++ generator. Satisfies UniformRandomBitGenerator.
class Rng {
 public:
  using result_type = std::uint64_t;

  Rng(std::uint64_t seed, std::uint64_t stream_id) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }
  bool bernoulli(double p) noexcept { return uniform() < p; }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept { return (x << k) | (x >> (64 - k)); }

  std::uint64_t s_[4];
};

struct RngStream {
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;

  Rng engine() const noexcept { return Rng(seed, stream_id); }
};

}  // namespace grfabc
