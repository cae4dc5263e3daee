#pragma once

// Splittable random streams. Each simulated replication owns a stream keyed
// by (seed, n, replication), so results never depend on how replications are
// distributed over threads.

#include <cstdint>
#include <span>

namespace fivenum {

inline constexpr std::uint64_t splitmix64_mix(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// SplitMix64 (Steele, Lea & Flood) over a hashed key.
class StreamRng {
 public:
  StreamRng(std::uint64_t seed, std::uint64_t stream_a, std::uint64_t stream_b = 0) noexcept
      : state_(splitmix64_mix(splitmix64_mix(splitmix64_mix(seed + kGamma) ^ stream_a) ^
                              (stream_b + kGamma))) {}

  // UniformRandomBitGenerator, for use with <random> distributions.
  using result_type = std::uint64_t;
  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return ~result_type{0}; }
  result_type operator()() noexcept { return next_u64(); }

  std::uint64_t next_u64() noexcept {
    state_ += kGamma;
    return splitmix64_mix(state_);
  }

  // Uniform on the open interval (0, 1); never returns 0 or 1.
  double uniform() noexcept {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  void fill_uniform(std::span<double> out) noexcept {
    for (double& u : out) u = uniform();
  }

 private:
  static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;
  std::uint64_t state_;
};

}  // namespace fivenum
