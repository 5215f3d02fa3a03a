#pragma once

#include <cstdint>

namespace foldsim {

// Counter-based deterministic randomness: each draw is a pure function of
// (seed, shot, stream). Channel draws are therefore independent of programme
// order, which keeps shot records reproducible under any evaluation order.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

inline std::uint64_t counter_hash(std::uint64_t seed, std::uint64_t shot,
                                  std::uint64_t stream) {
  std::uint64_t h = splitmix64(seed ^ 0x8f1bbcdcbfa53e0bull);
  h = splitmix64(h ^ shot);
  h = splitmix64(h ^ (stream + 0x2545f4914f6cdd1dull));
  return h;
}

// Uniform double in [0, 1) with 53 random bits.
inline double counter_uniform(std::uint64_t seed, std::uint64_t shot,
                              std::uint64_t stream) {
  return static_cast<double>(counter_hash(seed, shot, stream) >> 11) * 0x1.0p-53;
}

// FNV-1a 64-bit, used for content hashes (circuit text, sweep sub-seeds).
inline std::uint64_t fnv1a64(const void* data, std::size_t n,
                             std::uint64_t h = 0xcbf29ce484222325ull) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ull;
  }
  return h;
}

}  // namespace foldsim
