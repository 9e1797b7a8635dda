// Seeded random streams with explicit derivation paths.
//
// Every random quantity in the library is a pure function of a 64-bit seed,
// and seeds for sub-tasks are derived with fold_seed(parent, word). Sweeps
// therefore produce identical results for any thread count or task order.
#pragma once

#include <cmath>
#include <cstdint>

namespace hidim {

inline constexpr std::uint64_t kSeedPhi = 0x9e3779b97f4a7c15ull;

/// Bijective 64-bit avalanche (SplitMix64 finalizer).
inline constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += kSeedPhi;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

/// Derives a child seed; distinct words give statistically independent
/// streams under the same parent.
inline constexpr std::uint64_t fold_seed(std::uint64_t seed,
                                         std::uint64_t word) noexcept {
  return mix64(seed ^ mix64(word));
}

/// Counter-based 64-bit generator (SplitMix64). Satisfies
/// UniformRandomBitGenerator; cheap to construct, trivially copyable.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t seed = 0) noexcept : state_(seed) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return ~0ull; }

  result_type operator()() noexcept {
    std::uint64_t z = (state_ += kSeedPhi);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  /// Uniform on (0, 1]; never 0, so log() is safe.
  double uniform01() noexcept {
    return static_cast<double>(((*this)() >> 11) + 1) * 0x1.0p-53;
  }

  /// Uniform on [-1, 1).
  double uniform_sym() noexcept {
    return static_cast<double>(static_cast<std::int64_t>((*this)())) *
           0x1.0p-63;
  }

  /// +1 or -1 with equal probability.
  int rademacher() noexcept { return ((*this)() >> 63) ? 1 : -1; }

  /// Uniform integer in [0, bound). bound must be nonzero.
  std::uint64_t below(std::uint64_t bound) noexcept {
    // rejection sampling on the top of the range to avoid modulo bias
    const std::uint64_t limit = max() - max() % bound;
    std::uint64_t x;
    do {
      x = (*this)();
    } while (x >= limit);
    return x % bound;
  }

  /// Standard normal draw (Marsaglia polar method, spare cached).
  double normal() noexcept {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = uniform_sym();
      v = uniform_sym();
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double scale = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * scale;
    has_spare_ = true;
    return u * scale;
  }

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace hidim
