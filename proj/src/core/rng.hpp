#pragma once

#include <cstdint>
#include <random>

namespace dentropy {

/// Seeded random stream used by every sampler.
///
/// Identity (fixed for the 1.x series): std::mt19937_64 seeded with the raw
/// 64-bit seed; uniform deviates take the top 53 bits of each draw, so they
/// lie on [0, 1); standard normals come from the Marsaglia polar method.
/// Replicate r of a run with base seed s uses seed s + r.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double normal();

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

inline std::uint64_t replicate_seed(std::uint64_t base_seed, std::uint64_t replicate) {
  return base_seed + replicate;
}

}  // namespace dentropy
