#pragma once

#include "spherelab/common.hpp"

#include <cmath>
#include <cstdint>

namespace spherelab {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

// SplitMix64 generator. All sampling in the laboratory goes through this so
// that scan reports are reproducible bit-for-bit for a given seed, with no
// dependence on standard-library distribution internals.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1).
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Standard normal via Box-Muller on the raw uniform stream.
  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    do {
      u1 = uniform01();
    } while (u1 <= 0.0);
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(kTwoPi * u2);
    have_spare_ = true;
    return r * std::cos(kTwoPi * u2);
  }

  Vec gaussian_vec(int n) {
    Vec v(n);
    for (int i = 0; i < n; ++i) v[i] = gaussian();
    return v;
  }

 private:
  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

/// Seed for stream `index` of a scan: one golden-ratio step per index pushed
/// through the SplitMix64 finaliser. Chunked samplers draw their chunk seeds
/// from here, so chunks can run in parallel and still merge deterministically.
inline std::uint64_t derive_stream_seed(std::uint64_t master, std::uint64_t index) {
  SplitMix64 mix(master + (index + 1) * 0x9e3779b97f4a7c15ULL);
  return mix.next_u64();
}

}  // namespace spherelab
