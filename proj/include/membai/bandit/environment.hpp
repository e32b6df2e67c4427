#pragma once

#include <concepts>
#include <cstddef>
#include <random>
#include <utility>

#include "membai/bandit/stats.hpp"

namespace membai {

/// Random stream handed to environments. One stream per policy run.
using Rng = std::mt19937_64;

/// Anything that has K arms and returns a real reward for a pull. Rewards are
/// maximized. The reward law may depend only on the arm; all randomness must
/// come from the supplied stream.
template <class E>
concept RewardEnvironment = requires(E& env, const E& cenv, ArmIndex arm, Rng& rng) {
  { cenv.arm_count() } -> std::convertible_to<std::size_t>;
  { env.pull(arm, rng) } -> std::convertible_to<double>;
};

}  // namespace membai
