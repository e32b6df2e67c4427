#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "membai/errors.hpp"

namespace membai {

/// Position of an arm inside one problem instance, always < K.
struct ArmIndex {
  std::size_t value = 0;

  constexpr ArmIndex() = default;
  constexpr explicit ArmIndex(std::size_t v) : value(v) {}
  friend constexpr auto operator<=>(ArmIndex, ArmIndex) = default;
};

/// Per-arm pull counts and reward sums. Means are derived on demand from the
/// (sum, count) pair.
class BanditStats {
 public:
  explicit BanditStats(std::size_t arm_count)
      : pulls_(arm_count, 0), sums_(arm_count, 0.0) {}

  /// Builds stats from explicit counts and sums (tests, replay).
  static BanditStats from_counts(std::span<const std::uint64_t> pulls,
                                 std::span<const double> sums) {
    if (pulls.size() != sums.size()) {
      throw InvalidProblemError("pull count and reward sum lengths differ");
    }
    BanditStats s(pulls.size());
    for (std::size_t i = 0; i < pulls.size(); ++i) {
      s.pulls_[i] = pulls[i];
      s.sums_[i] = sums[i];
      s.total_ += pulls[i];
    }
    return s;
  }

  /// One pull per arm with the given rewards; handy for setting up means.
  static BanditStats from_means(std::span<const double> means) {
    BanditStats s(means.size());
    for (std::size_t i = 0; i < means.size(); ++i) s.record(ArmIndex{i}, means[i]);
    return s;
  }

  std::size_t arm_count() const noexcept { return pulls_.size(); }
  std::uint64_t total_rounds() const noexcept { return total_; }
  std::uint64_t pulls(ArmIndex arm) const { return pulls_.at(arm.value); }
  double reward_sum(ArmIndex arm) const { return sums_.at(arm.value); }
  std::span<const std::uint64_t> pull_counts() const noexcept { return pulls_; }

  bool pulled(ArmIndex arm) const { return pulls(arm) > 0; }
  bool all_pulled() const noexcept {
    for (auto c : pulls_) {
      if (c == 0) return false;
    }
    return true;
  }

  /// Empirical mean; throws when the arm has never been pulled.
  double mean(ArmIndex arm) const {
    const auto c = pulls(arm);
    if (c == 0) {
      throw IncompleteExplorationError("arm " + std::to_string(arm.value) +
                                       " has no pulls; empirical mean undefined");
    }
    return sums_[arm.value] / static_cast<double>(c);
  }

  void record(ArmIndex arm, double reward) {
    pulls_.at(arm.value) += 1;
    sums_[arm.value] += reward;
    ++total_;
  }

 private:
  std::vector<std::uint64_t> pulls_;
  std::vector<double> sums_;
  std::uint64_t total_ = 0;
};

/// Arm with the largest empirical mean, lowest index on ties.
inline ArmIndex recommend(const BanditStats& stats) {
  if (stats.arm_count() == 0) throw InvalidProblemError("no arms to recommend from");
  std::size_t best = 0;
  double best_mean = stats.mean(ArmIndex{0});
  for (std::size_t i = 1; i < stats.arm_count(); ++i) {
    const double m = stats.mean(ArmIndex{i});
    if (m > best_mean) {
      best_mean = m;
      best = i;
    }
  }
  return ArmIndex{best};
}

}  // namespace membai
