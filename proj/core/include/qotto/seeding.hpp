// Deterministic derivation of independent child seeds from one master seed.
#pragma once

#include <cstdint>

namespace qotto {

// SplitMix64 finalizer; child seeds for distinct indices are decorrelated.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t z = master + 0x9E3779B97F4A7C15ull * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace qotto
