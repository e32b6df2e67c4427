#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "membai/errors.hpp"

namespace membai {

/// 1/2 + sum_{i=2..K} 1/i.
inline double log_bar(std::size_t arm_count) {
  if (arm_count < 2) {
    throw InvalidProblemError("log_bar needs at least 2 arms, got " +
                              std::to_string(arm_count));
  }
  double acc = 0.5;
  for (std::size_t i = 2; i <= arm_count; ++i) acc += 1.0 / static_cast<double>(i);
  return acc;
}

/// Phase lengths of Successive Rejects for K arms and total budget n.
///
/// `cumulative(k)` is n_k, the number of pulls every arm still alive after
/// phase k has received; phases are numbered 1..K-1 and n_0 = 0. The same
/// numbers give the phase boundaries t_k of adaptive UCB-E.
class SrSchedule {
 public:
  SrSchedule(std::size_t arm_count, std::uint64_t budget, double log_bar_k,
             std::vector<std::uint64_t> cumulative)
      : arm_count_(arm_count),
        budget_(budget),
        log_bar_k_(log_bar_k),
        cumulative_(std::move(cumulative)) {}

  std::size_t arm_count() const noexcept { return arm_count_; }
  std::uint64_t budget() const noexcept { return budget_; }
  double log_bar_k() const noexcept { return log_bar_k_; }
  std::size_t phase_count() const noexcept { return cumulative_.size(); }
  const std::vector<std::uint64_t>& cumulative() const noexcept { return cumulative_; }

  /// n_k for k in [0, K-1].
  std::uint64_t cumulative(std::size_t k) const {
    return k == 0 ? 0 : cumulative_.at(k - 1);
  }

  /// Pulls issued to each survivor during phase k (n_k - n_{k-1}).
  std::uint64_t phase_pulls(std::size_t k) const { return cumulative(k) - cumulative(k - 1); }

  /// t_k = n_1 + ... + n_{k-1} + (K-k+1) n_k; t_0 = 0. Equals the total
  /// number of SR pulls issued by the end of phase k.
  std::uint64_t boundary(std::size_t k) const {
    if (k == 0) return 0;
    std::uint64_t t = 0;
    for (std::size_t j = 1; j < k; ++j) t += cumulative(j);
    return t + static_cast<std::uint64_t>(arm_count_ - k + 1) * cumulative(k);
  }

  /// Pulls issued by a complete SR run.
  std::uint64_t total_pulls() const { return boundary(phase_count()); }

 private:
  std::size_t arm_count_;
  std::uint64_t budget_;
  double log_bar_k_;
  std::vector<std::uint64_t> cumulative_;
};

namespace detail {

inline std::uint64_t sr_total(std::size_t arm_count, const std::vector<std::uint64_t>& n) {
  std::uint64_t total = 0;
  for (auto v : n) total += v;
  return total + (arm_count >= 2 ? n.back() : 0);
}

}  // namespace detail

/// n_k = ceil((n - K) / (log_bar(K) (K + 1 - k))) for k = 1..K-1.
///
/// Two guards sit on top of the raw formula: every n_k is at least 1 so the
/// survivors always carry a sample, and if rounding ever pushes the total over
/// n the latest phases are trimmed first.
inline SrSchedule sr_schedule(std::size_t arm_count, std::uint64_t budget) {
  const double lb = log_bar(arm_count);
  if (budget < arm_count) {
    throw InsufficientBudgetError("budget " + std::to_string(budget) + " is below arm count " +
                                  std::to_string(arm_count));
  }
  const double spare = static_cast<double>(budget - arm_count);
  std::vector<std::uint64_t> n(arm_count - 1);
  std::uint64_t prev = 0;
  for (std::size_t k = 1; k < arm_count; ++k) {
    const double exact = spare / (lb * static_cast<double>(arm_count + 1 - k));
    // Absorb representation error when the quotient is mathematically integral.
    const double rounded = std::ceil(exact - 1e-9 * std::max(1.0, exact));
    auto v = static_cast<std::uint64_t>(std::max(rounded, 1.0));
    v = std::max(v, prev);
    n[k - 1] = v;
    prev = v;
  }

  std::uint64_t total = detail::sr_total(arm_count, n);
  while (total > budget) {
    // Latest phase that can still shrink without breaking n_{k-1} <= n_k.
    std::size_t k = n.size();
    while (k-- > 0) {
      const std::uint64_t floor_k = k == 0 ? 1 : std::max<std::uint64_t>(n[k - 1], 1);
      if (n[k] > floor_k) break;
    }
    if (k >= n.size()) break;  // all ones: total == K <= n, unreachable
    --n[k];
    total -= (k + 1 == n.size()) ? 2 : 1;  // the last phase has two survivors
  }
  return SrSchedule(arm_count, budget, lb, std::move(n));
}

}  // namespace membai
