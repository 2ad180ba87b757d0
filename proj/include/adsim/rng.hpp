#pragma once

#include <cmath>
#include <cstdint>

namespace adsim {

// All randomness in the toolkit flows from one 64-bit manifest seed through
// the substream derivation below. The mix is the splitmix64 finalizer; the
// derivation is fixed so that any run is reproducible bit-for-bit from
// (seed, domain tag, replication, entity index).
inline constexpr std::uint64_t kStreamGamma = 0x9E3779B97F4A7C15ull;

inline constexpr std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ull;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBull;
  x ^= x >> 31;
  return x;
}

enum class StreamTag : std::uint64_t {
  kArrival = 1,      // per (replication, user): session-start coin flips
  kPageStep = 2,     // per (replication, user): start page + transitions
  kReplenish = 3,    // per (replication, advertiser): budget replenishment
  kAssignment = 4,   // per experiment: user group assignment
  kGeneric = 5,      // ad-hoc draws (tests, synthetic data)
};

inline constexpr std::uint64_t derive_stream(std::uint64_t seed, StreamTag tag,
                                             std::uint64_t a = 0,
                                             std::uint64_t b = 0) {
  std::uint64_t h = mix64(seed + kStreamGamma);
  h = mix64(h ^ (static_cast<std::uint64_t>(tag) + kStreamGamma));
  h = mix64(h ^ (a + kStreamGamma));
  h = mix64(h ^ (b + kStreamGamma));
  return h;
}

// Counter-based uniform generator (splitmix64). Cheap to fork: every
// substream is just a different key.
class Stream {
 public:
  Stream() = default;
  explicit Stream(std::uint64_t key) : state_(key) {}

  std::uint64_t next_u64() {
    state_ += kStreamGamma;
    return mix64(state_);
  }

  // Uniform on [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform() < p; }

  // Standard normal via Box-Muller; draws two uniforms per call so the
  // stream position is input-independent.
  double normal() {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }

 private:
  std::uint64_t state_ = 0;
};

}  // namespace adsim
