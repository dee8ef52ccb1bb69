#pragma once

#include <cstdint>
#include <limits>

namespace curvlab {

/// Counter-based generator keyed by (seed, stream). The i-th output of a
/// stream is a pure function of (seed, stream, i), so replicates can be run
/// in any order on any number of threads and still reproduce bit for bit.
class Rng {
 public:
  using result_type = std::uint64_t;

  Rng(std::uint64_t seed, std::uint64_t stream)
      : key_(mix(seed ^ mix(stream + kGolden))) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() { return mix(key_ + (++counter_) * kGolden); }

  /// Uniform on [0, 1) with 53 bits of resolution.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, n). Lemire's rejection keeps it unbiased.
  std::uint64_t below(std::uint64_t n) {
    if (n <= 1) return 0;
    const std::uint64_t threshold = (0 - n) % n;
    for (;;) {
      const auto r = (*this)();
      const auto m = static_cast<unsigned __int128>(r) * n;
      if (static_cast<std::uint64_t>(m) >= threshold) return static_cast<std::uint64_t>(m >> 64);
    }
  }

  std::uint64_t position() const { return counter_; }

 private:
  static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

  static constexpr std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace curvlab
