#pragma once

#include <random>
#include <string>
#include <vector>

#include "membai/bandit/environment.hpp"
#include "membai/errors.hpp"

namespace membai {

struct ArmSpec {
  enum class Kind { constant, gaussian };
  Kind kind = Kind::constant;
  double mean = 0.0;
  double sd = 0.0;

  static ArmSpec constant(double v) { return ArmSpec{Kind::constant, v, 0.0}; }
  static ArmSpec gaussian(double mean, double sd) { return ArmSpec{Kind::gaussian, mean, sd}; }
};

/// Arms with known reward laws; the validation bed for the policies.
class SyntheticEnvironment {
 public:
  explicit SyntheticEnvironment(std::vector<ArmSpec> arms) : arms_(std::move(arms)) {
    for (const auto& a : arms_) {
      if (!(a.sd >= 0.0)) throw ConfigError("synthetic arm sd must be >= 0");
    }
  }

  /// Gaussian arms with means evenly spaced from `lo` to `hi`.
  static SyntheticEnvironment linear_gaussian(std::size_t k, double lo, double hi, double sd) {
    std::vector<ArmSpec> arms;
    arms.reserve(k);
    for (std::size_t i = 0; i < k; ++i) {
      const double t = k == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(k - 1);
      arms.push_back(ArmSpec::gaussian(lo + t * (hi - lo), sd));
    }
    return SyntheticEnvironment(std::move(arms));
  }

  std::size_t arm_count() const noexcept { return arms_.size(); }
  const std::vector<ArmSpec>& arms() const noexcept { return arms_; }

  double pull(ArmIndex arm, Rng& rng) const {
    const ArmSpec& a = arms_.at(arm.value);
    if (a.kind == ArmSpec::Kind::constant || a.sd == 0.0) return a.mean;
    return std::normal_distribution<double>(a.mean, a.sd)(rng);
  }

 private:
  std::vector<ArmSpec> arms_;
};

static_assert(RewardEnvironment<SyntheticEnvironment>);

}  // namespace membai
