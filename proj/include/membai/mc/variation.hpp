#pragma once

#include <cstddef>
#include <random>

#include "membai/bandit/environment.hpp"
#include "membai/memory/tech.hpp"

namespace membai {

/// Draws that fall outside +-3 sigma of V_th0 are rejected and redrawn.
inline constexpr double kVthTruncationSigmas = 3.0;

/// Normal(mean, sigma) truncated to [mean - 3 sigma, mean + 3 sigma].
inline double truncated_normal(Rng& rng, double mean, double sigma) {
  if (!(sigma > 0.0)) return mean;
  std::normal_distribution<double> normal(mean, sigma);
  const double half_width = kVthTruncationSigmas * sigma;
  for (;;) {
    const double v = normal(rng);
    if (v >= mean - half_width && v <= mean + half_width) return v;
  }
}

/// Peripheral and cell supplies independently uniform over the configured
/// levels, then one threshold voltage per device class.
inline VariationSample sample_variation(Rng& rng, const TechConfig& tech) {
  std::uniform_int_distribution<std::size_t> level(0, tech.supply_levels.size() - 1);
  VariationSample s;
  s.vdd_periph = tech.supply_levels[level(rng)];
  s.vdd_cell = tech.supply_levels[level(rng)];
  const double sigma = tech.vth_sigma();
  for (double& v : s.vth) v = truncated_normal(rng, tech.vth0, sigma);
  return s;
}

}  // namespace membai
