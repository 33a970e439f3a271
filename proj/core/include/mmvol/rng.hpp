#ifndef MMVOL_RNG_HPP
#define MMVOL_RNG_HPP

#include <cstdint>

namespace mmvol {

// Counter-based splittable generator built on the SplitMix64 finalizer.
//
// Every Monte Carlo sample index owns an independent stream derived from
// (seed, index), so estimates do not depend on how samples are distributed
// over worker threads. That is what makes MT_THREADS a pure performance
// knob: rerunning with a different worker count reproduces results bit for
// bit.
class SplitRng {
 public:
  explicit SplitRng(uint64_t state) : state_(state) {}

  static uint64_t mix(uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Stream for one sample index.
  static SplitRng for_sample(uint64_t seed, uint64_t index) {
    return SplitRng(mix(seed ^ (0xD1B54A32D192ED03ULL * (index + 1))));
  }

  // Deterministically derive a sub-seed (e.g. one per integral in a larger
  // computation) without consuming state from the parent seed.
  static uint64_t derive(uint64_t seed, uint64_t tag) {
    return mix(seed + 0xA0761D6478BD642FULL * (tag + 1));
  }

  uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ULL;
    uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform on the open interval (0,1); never returns an exact endpoint,
  // which keeps integrable boundary singularities out of the integrand.
  double next_u01() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

 private:
  uint64_t state_;
};

}  // namespace mmvol

#endif  // MMVOL_RNG_HPP
