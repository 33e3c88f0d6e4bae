#pragma once

#include <cstdint>
#include <random>

namespace qcarm {

// Seeded generator used for every sampled outcome. Per-run streams are derived
// from (seed, run index) through std::seed_seq, whose mixing algorithm is fixed
// by the standard, so streams are reproducible across platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t run = 0) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(run), static_cast<std::uint32_t>(run >> 32)};
    engine_.seed(seq);
  }

  /// Uniform double in [0, 1) from the top 53 bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace qcarm
