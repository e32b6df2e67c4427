#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "membai/bandit/environment.hpp"
#include "membai/design_space.hpp"
#include "membai/errors.hpp"
#include "membai/mc/variation.hpp"
#include "membai/memory/cost.hpp"
#include "membai/memory/model.hpp"

namespace membai {

/// Expectation targets; +inf disables a constraint.
struct Constraints {
  double t_acc_target = std::numeric_limits<double>::infinity();
  double p_dyn_target = std::numeric_limits<double>::infinity();
};

inline constexpr int kInfeasibleRetries = 8;
inline constexpr double kDefaultPenalty = 10.0;

/// Minima of access time and energy over `arms` at nominal thresholds and
/// the highest supply level.
inline Normalizer nominal_normalizer(const std::vector<MemoryArchitecture>& arms,
                                     const TechConfig& tech) {
  if (arms.empty()) throw EmptyDesignSpaceError("cannot normalise an empty design space");
  const double vmax = *std::max_element(tech.supply_levels.begin(), tech.supply_levels.end());
  const VariationSample theta = nominal_sample(tech, vmax);
  Normalizer n = Normalizer::fixed(std::numeric_limits<double>::infinity(),
                                   std::numeric_limits<double>::infinity());
  for (const auto& a : arms) {
    const PerfMetrics m = evaluate(compute_loads(a, tech), theta, tech);
    n.min_t_acc = std::min(n.min_t_acc, m.t_acc);
    n.min_p_dyn = std::min(n.min_p_dyn, m.p_dyn);
  }
  return n;
}

/// Each pull draws a variation sample and returns the negated penalised cost
/// of the arm's architecture under it.
///
/// Copies share the architecture table. A copy owns its normalizer, so in
/// running mode every policy run should work on its own copy.
class MemoryEnvironment {
 public:
  MemoryEnvironment(std::vector<MemoryArchitecture> arms, TechConfig tech, CostWeights weights,
                    Normalizer normalizer, Constraints constraints = {},
                    double penalty = kDefaultPenalty)
      : shared_(std::make_shared<Shared>(std::move(arms), std::move(tech))),
        weights_(weights),
        normalizer_(normalizer),
        constraints_(constraints),
        penalty_(penalty) {
    if (shared_->arms.empty()) throw EmptyDesignSpaceError("memory environment has no arms");
    weights_.validate();
    if (!(penalty_ >= 0.0)) throw ConfigError("penalty lambda must be non-negative");
    if (!(constraints_.t_acc_target > 0.0) || !(constraints_.p_dyn_target > 0.0)) {
      throw ConfigError("constraint targets must be positive");
    }
  }

  std::size_t arm_count() const noexcept { return shared_->arms.size(); }
  const std::vector<MemoryArchitecture>& arms() const noexcept { return shared_->arms; }
  const TechConfig& tech() const noexcept { return shared_->tech; }
  const CostWeights& weights() const noexcept { return weights_; }
  const Normalizer& normalizer() const noexcept { return normalizer_; }
  const Constraints& constraints() const noexcept { return constraints_; }
  double penalty() const noexcept { return penalty_; }
  const ArchitectureLoads& loads(ArmIndex arm) const { return shared_->loads.at(arm.value); }

  PerfMetrics metrics(ArmIndex arm, const VariationSample& theta) const {
    return evaluate(loads(arm), theta, shared_->tech);
  }

  /// Negated cost plus lambda times the relative constraint overshoot.
  /// Does not touch the normalizer.
  double reward(const PerfMetrics& m) const {
    const double overshoot = std::max(0.0, m.t_acc / constraints_.t_acc_target - 1.0) +
                             std::max(0.0, m.p_dyn / constraints_.p_dyn_target - 1.0);
    return -(cost(m, weights_, normalizer_) + penalty_ * overshoot);
  }

  double pull(ArmIndex arm, Rng& rng) {
    if (arm.value >= arm_count()) {
      throw InvalidProblemError("arm " + std::to_string(arm.value) + " out of range");
    }
    for (int attempt = 0; attempt <= kInfeasibleRetries; ++attempt) {
      const VariationSample theta = sample_variation(rng, shared_->tech);
      PerfMetrics m;
      try {
        m = metrics(arm, theta);
      } catch (const InfeasibleOperatingPointError&) {
        continue;
      }
      normalizer_ = update_normalizer(normalizer_, m);
      return reward(m);
    }
    throw InfeasibleOperatingPointError("arm " + std::to_string(arm.value) + ": " +
                                        std::to_string(kInfeasibleRetries + 1) +
                                        " consecutive infeasible variation samples");
  }

 private:
  struct Shared {
    Shared(std::vector<MemoryArchitecture> a, TechConfig t) : arms(std::move(a)), tech(std::move(t)) {
      loads.reserve(arms.size());
      for (const auto& arch : arms) loads.push_back(compute_loads(arch, tech));
    }
    std::vector<MemoryArchitecture> arms;
    TechConfig tech;
    std::vector<ArchitectureLoads> loads;
  };

  std::shared_ptr<const Shared> shared_;
  CostWeights weights_;
  Normalizer normalizer_;
  Constraints constraints_;
  double penalty_;
};

static_assert(RewardEnvironment<MemoryEnvironment>);

}  // namespace membai
