#pragma once

#include <cstdint>
#include <random>

namespace otdr {

using Rng = std::mt19937_64;

// SplitMix64 finalizer applied to (base, stream). Child seeds for distinct
// streams are decorrelated, so callers can hand out one seed per pair, per
// epoch, or per stochastic stage without sharing generator state.
constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) noexcept {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline Rng make_rng(std::uint64_t seed) { return Rng(derive_seed(seed, 0xC0FFEEULL)); }

}  // namespace otdr
