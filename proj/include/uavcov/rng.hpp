#pragma once

#include <cstdint>
#include <random>

namespace uavcov {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept
{
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Independent generator for substream `index` of `seed`. Depends only on
/// (seed, index), so results do not depend on how work is scheduled.
inline Rng substream(std::uint64_t seed, std::uint64_t index)
{
  return Rng(mix64(mix64(seed) ^ mix64(index + 0x632be59bd9b4e019ULL)));
}

} // namespace uavcov
