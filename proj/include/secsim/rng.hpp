#pragma once

#include <cstdint>
#include <random>

namespace secsim {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer; decorrelates nearby seeds.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Independent generator for (seed, stream). Parallel trials key their
/// streams by trial index so results do not depend on scheduling.
inline Rng stream_rng(std::uint64_t seed, std::uint64_t stream) {
  return Rng(mix64(mix64(seed) ^ mix64(stream + 0x632be59bd9b4e019ULL)));
}

inline double uniform01(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

}  // namespace secsim
