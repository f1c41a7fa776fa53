#pragma once

/// Counter-based random numbers: every draw is a pure function of
/// (seed, stream, index), so paths can be extended or re-indexed without
/// disturbing values already drawn. The generator is a 64-bit split-mix
/// finalizer chain; normals come from Box–Muller on two counter words.

#include <cmath>
#include <cstdint>
#include <numbers>

namespace calmedns::rng {

constexpr std::uint64_t mix(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ULL;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebULL;
  z ^= z >> 31;
  return z;
}

inline std::uint64_t word(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  std::uint64_t h = mix(seed + 0x9e3779b97f4a7c15ULL);
  h = mix(h ^ (stream + 0x3c6ef372fe94f82aULL));
  h = mix(h ^ (index + 0x78dde6e5fd29f05bULL));
  return h;
}

/// (0, 1]
inline double uniform01(std::uint64_t w) {
  return static_cast<double>((w >> 11) + 1) * 0x1.0p-53;
}

inline double uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  return uniform01(word(seed, stream, index));
}

inline double normal(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  const double u1 = uniform01(word(seed, stream, 2 * index));
  const double u2 = uniform01(word(seed, stream, 2 * index + 1));
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

// stream ids
inline constexpr std::uint64_t kWienerBase = 1;       // + refinement level
inline constexpr std::uint64_t kOuInit = 100;
inline constexpr std::uint64_t kInitialField = 200;
inline constexpr std::uint64_t kAxiomSamples = 300;
inline constexpr std::uint64_t kFieldSamples = 400;

}  // namespace calmedns::rng
