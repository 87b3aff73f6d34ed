#pragma once

#include <cstdint>
#include <random>

namespace parkassign {

using Rng = std::mt19937_64;

// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Independent seed for (base, stream, index). Used to give every replication
// and every random component its own stream, so prefixes of a replication
// sequence never depend on its length.
constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream,
                                    std::uint64_t index = 0) {
  return mix64(mix64(base ^ mix64(stream + 0x51ed27u)) + index);
}

namespace streams {
inline constexpr std::uint64_t kArrivalTimes = 1;
inline constexpr std::uint64_t kEntryLinks = 2;
inline constexpr std::uint64_t kGroups = 3;
inline constexpr std::uint64_t kTolerance = 4;
inline constexpr std::uint64_t kRandomChoice = 5;
inline constexpr std::uint64_t kReplication = 6;
inline constexpr std::uint64_t kSynthetic = 7;
}  // namespace streams

inline double uniform01(Rng& rng) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

}  // namespace parkassign
