#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>

namespace aqec {

using Rng = std::mt19937_64;

// Finalizer from splitmix64. Used to derive independent stream seeds from a
// master seed; the quality of mt19937_64 seeding from a single word is poor,
// so every stream goes through this mix first.
inline uint64_t mix64(uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

inline Rng make_rng(uint64_t seed) { return Rng(mix64(seed)); }

// Child stream keyed by (master seed, stream tag, index). Streams depend only
// on the key, never on scheduling, so results are worker-count independent.
inline Rng split_rng(uint64_t master_seed, uint64_t stream_tag, uint64_t index) {
  uint64_t s = mix64(master_seed ^ mix64(stream_tag));
  return Rng(mix64(s ^ mix64(index)));
}

// Uniform in [0, bound). Rejection against the top of the range; avoids the
// implementation-defined behaviour of std::uniform_int_distribution so that
// seeded runs are byte-identical across standard libraries.
inline uint64_t rng_below(Rng& g, uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("rng_below: bound must be positive");
  uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    uint64_t r = g();
    if (r >= threshold) return r % bound;
  }
}

// Uniform double in [0, 1) with 53 random bits.
inline double rng_unit(Rng& g) {
  return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

inline bool rng_bool(Rng& g) { return (g() >> 63) != 0; }

}  // namespace aqec
