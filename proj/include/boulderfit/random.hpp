#pragma once

// Counter-based random numbers: every draw is a pure function of
// (seed, stream, i, j), so drawing for one entity never shifts the draws
// of another.

#include <cmath>
#include <cstdint>
#include <numbers>

namespace boulderfit {

class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0) noexcept
      : key_(mix(seed ^ mix(stream + 0x632be59bd9b4e019ULL))) {}

  std::uint64_t bits(std::uint64_t i, std::uint64_t j = 0) const noexcept {
    return mix(key_ ^ mix(i * 0x9e3779b97f4a7c15ULL + mix(j + 0x2545f4914f6cdd1dULL)));
  }

  // Uniform in the open interval (0, 1).
  double uniform(std::uint64_t i, std::uint64_t j = 0) const noexcept {
    return (static_cast<double>(bits(i, j) >> 11) + 0.5) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller over two independent counters.
  double normal(std::uint64_t i, std::uint64_t j = 0) const noexcept {
    const double u1 = uniform(i, 2 * j);
    const double u2 = uniform(i, 2 * j + 1);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  // splitmix64 finalizer
  static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t key_;
};

}  // namespace boulderfit
