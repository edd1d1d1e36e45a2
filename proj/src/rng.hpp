// rng.hpp: deterministic random generation. One generator per thread; all
// sampling code takes the generator explicitly.
#pragma once

#include <cstdint>
#include <random>

namespace freqsev {

using Rng = std::mt19937_64;

/// splitmix64 step; used to derive decorrelated sub-seeds from a master seed.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Generator for stream `stream` of master seed `seed`. Streams are
/// independent in the splitmix64 sense, so parallel workers can each own one.
inline Rng make_rng(std::uint64_t seed, std::uint64_t stream = 0) {
  return Rng(splitmix64(seed + 0x9e3779b97f4a7c15ULL * stream));
}

/// Uniform draw on the open interval (0, 1); 53-bit resolution, never
/// exactly 0 or 1, so it is safe to push through quantile functions.
inline double uniform01(Rng& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

} // namespace freqsev
