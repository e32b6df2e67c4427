#pragma once

#include <cstdint>
#include <string>

#include "membai/errors.hpp"

namespace membai {

/// SplitMix64 output function (increment + finalizer). A bijection on
/// 64-bit words.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

inline constexpr std::uint64_t kMaxRepetition = (1ull << 48) - 1;

/// Seed of one policy run. The (policy, multiplier, repetition) tuple is
/// packed into 8 + 8 + 48 bits and mixed with the hashed master seed, so for
/// a fixed master seed distinct tuples always get distinct seeds.
constexpr std::uint64_t derive_seed(std::uint64_t master_seed, std::uint32_t policy_id,
                                    std::uint32_t multiplier_index, std::uint64_t repetition) {
  if (policy_id > 0xff || multiplier_index > 0xff || repetition > kMaxRepetition) {
    throw InvalidProblemError("seed tuple out of range (policy " + std::to_string(policy_id) +
                              ", multiplier " + std::to_string(multiplier_index) +
                              ", repetition " + std::to_string(repetition) + ")");
  }
  const std::uint64_t packed = (static_cast<std::uint64_t>(policy_id) << 56) |
                               (static_cast<std::uint64_t>(multiplier_index) << 48) | repetition;
  return splitmix64(splitmix64(master_seed) ^ packed);
}

/// Slot reserved for the golden-arm baseline run.
inline constexpr std::uint32_t kGoldenPolicyId = 0xff;

}  // namespace membai
