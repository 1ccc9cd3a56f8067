#pragma once

#include <cstdint>
#include <random>

namespace eglasso::rng {

// splitmix64 finalizer, used to mix (seed, replication, phase) into a
// stream key so parallel replications draw from independent streams.
inline std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

enum class Phase : std::uint64_t {
  gaussian = 1,
  pareto = 2,
  graph = 3,
  weights = 4,
};

inline std::mt19937_64 stream(std::uint64_t seed, std::uint64_t replication,
                              Phase phase) {
  std::uint64_t key = mix(seed);
  key = mix(key ^ replication);
  key = mix(key ^ static_cast<std::uint64_t>(phase));
  return std::mt19937_64(key);
}

}  // namespace eglasso::rng
