#pragma once

#include <cstdint>
#include <random>

namespace alab {

// SplitMix64 finalizer; used to derive independent per-trial seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index);

// Portable deterministic generator. The standard distributions are
// implementation-defined, so uniform variates are produced from raw bits.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // Uniform integer on [lo, hi].
  int uniform_int(int lo, int hi);

 private:
  std::mt19937_64 engine_;
};

}  // namespace alab
