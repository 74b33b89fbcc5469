#pragma once
#include <cstdint>
#include <cmath>

namespace wavemaps {

// Counter-based generator: every draw is a pure function of (seed, stream,
// counter), so ensemble sample k reproduces bit-identically regardless of
// how samples are scheduled across workers.
struct CounterRng {
  uint64_t seed;
  uint64_t stream;
  uint64_t ctr = 0;

  CounterRng(uint64_t seed_, uint64_t stream_) : seed(seed_), stream(stream_) {}

  static uint64_t mix(uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  uint64_t next_u64() {
    uint64_t z = mix(seed ^ mix(stream ^ mix(ctr++)));
    return z;
  }

  // uniform in [0,1)
  double next_double() { return (next_u64() >> 11) * 0x1.0p-53; }

  // standard normal, Box-Muller (always consumes two draws)
  double next_normal() {
    double u1 = next_double(), u2 = next_double();
    if (u1 < 1e-300) u1 = 1e-300;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586477 * u2);
  }
};

} // namespace wavemaps
