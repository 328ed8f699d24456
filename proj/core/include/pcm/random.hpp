#pragma once

#include <cstdint>

namespace pcm {

/// SplitMix64 generator. Every seeded routine in the toolkit draws from this
/// so that a seed names the same stream on every platform and language:
///
///   state += 0x9E3779B97F4A7C15
///   z = state
///   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
///   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
///   return z ^ (z >> 31)
///
/// Derived values:
///   uniform01()  = (next() >> 11) * 2^-53, in [0, 1)
///   below(n)     = next() % n after rejecting draws < (2^64 - n) % n
///   normal()     = Marsaglia polar method: u = 2*uniform01()-1,
///                  v = 2*uniform01()-1, s = u*u+v*v, redraw while s >= 1 or
///                  s == 0; f = sqrt(-2 ln s / s); returns u*f and caches v*f
///                  for the next call.
///   split()      = SplitMix64(next()); the cached normal is not inherited.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  std::uint64_t next() noexcept;
  double uniform01() noexcept;
  std::uint64_t below(std::uint64_t n) noexcept;
  double normal() noexcept;
  SplitMix64 split() noexcept { return SplitMix64(next()); }

 private:
  std::uint64_t state_;
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

}  // namespace pcm
