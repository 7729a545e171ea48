#pragma once

// Counter-based pseudo-randomness: every draw is a hash of (seed, purpose,
// coordinates), so streams can be indexed by batch row / iteration / column
// without any sequential state. This is what makes sampling runs reproducible
// at any degree of parallelism.

#include <cstdint>
#include <initializer_list>

namespace satgrad {

// splitmix64 finalizer.
inline uint64_t mix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

inline uint64_t hash_stream(std::initializer_list<uint64_t> xs) {
  uint64_t h = 0x243f6a8885a308d3ull;  // pi digits
  for (uint64_t x : xs) h = mix64(h ^ mix64(x));
  return h;
}

// Uniform in [0, 1) from the top 53 bits.
inline double u01(uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// Uniform integer in [0, n) by 128-bit multiply (n must be > 0). Bias is
// below 2^-64, irrelevant for test-data generation.
inline uint64_t bounded(uint64_t bits, uint64_t n) {
  return static_cast<uint64_t>(
      (static_cast<unsigned __int128>(bits) * n) >> 64);
}

}  // namespace satgrad
