#pragma once

// Fixed-budget best arm identification: uniform allocation, Successive
// Rejects, adaptive UCB-E and adaptive UGapE.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "membai/bandit/environment.hpp"
#include "membai/bandit/schedule.hpp"
#include "membai/bandit/stats.hpp"

namespace membai {

enum class Policy { uniform, successive_rejects, ucbe_auto, ugape_auto };

inline constexpr std::string_view policy_name(Policy p) {
  switch (p) {
    case Policy::uniform: return "uniform";
    case Policy::successive_rejects: return "sr";
    case Policy::ucbe_auto: return "ucbe_auto";
    case Policy::ugape_auto: return "ugape_auto";
  }
  return "?";
}

/// Floor applied to empirical gaps before they are inverted.
inline constexpr double kGapFloor = 1e-9;
/// Lower bound on the UGapE exploration parameter.
inline constexpr double kMinExploration = 1e-12;

struct RunOptions {
  bool record_trace = false;
  /// Multiplies the UCB-E exploration n/H and the UGapE exploration (n-K)/H.
  /// 1 reproduces the published adaptive rules; other values are for tests.
  double exploration_scale = 1.0;
};

struct RunResult {
  ArmIndex recommended;
  BanditStats stats;
  std::vector<ArmIndex> trace;     // pulled arms in order, if requested
  std::vector<ArmIndex> rejected;  // SR elimination order
};

namespace detail {

inline void check_problem(std::size_t arm_count, std::uint64_t budget) {
  if (arm_count < 2) {
    throw InvalidProblemError("need at least 2 arms, got " + std::to_string(arm_count));
  }
  if (budget < arm_count) {
    throw InsufficientBudgetError("budget " + std::to_string(budget) + " is below arm count " +
                                  std::to_string(arm_count));
  }
}

template <RewardEnvironment Env>
class Puller {
 public:
  Puller(Env& env, Rng& rng, const RunOptions& opts)
      : env_(env), rng_(rng), opts_(opts), stats_(env.arm_count()) {
    if (opts_.record_trace) trace_.reserve(1024);
  }

  void pull(ArmIndex arm) {
    const double reward = static_cast<double>(env_.pull(arm, rng_));
    stats_.record(arm, reward);
    if (opts_.record_trace) trace_.push_back(arm);
  }

  const BanditStats& stats() const { return stats_; }

  RunResult finish(ArmIndex recommended, std::vector<ArmIndex> rejected = {}) {
    return RunResult{recommended, std::move(stats_), std::move(trace_), std::move(rejected)};
  }

 private:
  Env& env_;
  Rng& rng_;
  const RunOptions& opts_;
  BanditStats stats_;
  std::vector<ArmIndex> trace_;
};

}  // namespace detail

// ---------------------------------------------------------------------------
// Uniform allocation (exhaustive Monte Carlo baseline)

/// Round t pulls arm t mod K until the budget is spent.
template <RewardEnvironment Env>
RunResult run_uniform(Env& env, std::uint64_t budget, Rng& rng, const RunOptions& opts = {}) {
  const std::size_t k = env.arm_count();
  detail::check_problem(k, budget);
  detail::Puller<Env> p(env, rng, opts);
  for (std::uint64_t t = 0; t < budget; ++t) p.pull(ArmIndex{static_cast<std::size_t>(t % k)});
  return p.finish(recommend(p.stats()));
}

// ---------------------------------------------------------------------------
// Successive Rejects

/// Runs K-1 phases; in phase k every surviving arm is drawn n_k - n_{k-1}
/// times (arm by arm, ascending index) and the survivor with the lowest mean
/// is dropped. Among equal means the highest index is dropped, so lower
/// indices are preferred exactly as in `recommend`.
template <RewardEnvironment Env>
RunResult run_successive_rejects(Env& env, std::uint64_t budget, Rng& rng,
                                 const RunOptions& opts = {}) {
  const std::size_t k_arms = env.arm_count();
  detail::check_problem(k_arms, budget);
  const SrSchedule schedule = sr_schedule(k_arms, budget);

  detail::Puller<Env> p(env, rng, opts);
  std::vector<std::size_t> active(k_arms);
  for (std::size_t i = 0; i < k_arms; ++i) active[i] = i;
  std::vector<ArmIndex> rejected;
  rejected.reserve(k_arms - 1);

  for (std::size_t phase = 1; phase < k_arms; ++phase) {
    const std::uint64_t draws = schedule.phase_pulls(phase);
    for (std::size_t arm : active) {
      for (std::uint64_t d = 0; d < draws; ++d) p.pull(ArmIndex{arm});
    }
    auto worst = active.begin();
    double worst_mean = p.stats().mean(ArmIndex{*worst});
    for (auto it = std::next(active.begin()); it != active.end(); ++it) {
      const double m = p.stats().mean(ArmIndex{*it});
      if (m <= worst_mean) {
        worst_mean = m;
        worst = it;
      }
    }
    rejected.push_back(ArmIndex{*worst});
    active.erase(worst);
  }
  return p.finish(ArmIndex{active.front()}, std::move(rejected));
}

// ---------------------------------------------------------------------------
// Adaptive UCB-E

/// S_{i,s}(b) = mean + sqrt(b / s); +inf for an arm that has never been
/// pulled.
inline double ucbe_score(double mean, std::uint64_t pulls, double exploration) {
  if (pulls == 0) return std::numeric_limits<double>::infinity();
  if (exploration == 0.0) return mean;
  return mean + std::sqrt(exploration / static_cast<double>(pulls));
}

/// Empirical gaps to the best mean, sorted ascending and floored.
inline std::vector<double> sorted_gaps(const BanditStats& stats) {
  const std::size_t k = stats.arm_count();
  std::vector<double> means(k);
  for (std::size_t i = 0; i < k; ++i) means[i] = stats.mean(ArmIndex{i});
  const double best = *std::max_element(means.begin(), means.end());
  std::vector<double> gaps(k);
  for (std::size_t i = 0; i < k; ++i) gaps[i] = std::max(best - means[i], kGapFloor);
  std::sort(gaps.begin(), gaps.end());
  return gaps;
}

/// H_k = max over i in [K-k+1, K] of i / gap_<i>^2, with gap_<1> <= ... <=
/// gap_<K>. Every arm must have been pulled.
inline double ucbe_complexity(const BanditStats& stats, std::size_t phase) {
  const std::size_t k = stats.arm_count();
  if (phase < 1 || phase > k) {
    throw InvalidProblemError("UCB-E complexity phase must lie in [1, K]");
  }
  const std::vector<double> gaps = sorted_gaps(stats);  // throws on unpulled arms
  double h = 0.0;
  for (std::size_t i = k - phase + 1; i <= k; ++i) {
    const double g = gaps[i - 1];
    h = std::max(h, static_cast<double>(i) / (g * g));
  }
  return h;
}

/// Phase 0 uses H = K; phase k >= 1 re-estimates H from the means at the
/// phase boundary t_k and keeps it until t_{k+1}. The final phase runs to n.
template <RewardEnvironment Env>
RunResult run_adaptive_ucbe(Env& env, std::uint64_t budget, Rng& rng,
                            const RunOptions& opts = {}) {
  const std::size_t k_arms = env.arm_count();
  detail::check_problem(k_arms, budget);
  const SrSchedule schedule = sr_schedule(k_arms, budget);

  detail::Puller<Env> p(env, rng, opts);
  const double n = static_cast<double>(budget);
  std::vector<double> means(k_arms, 0.0);

  for (std::size_t phase = 0; phase < k_arms; ++phase) {
    const double complexity = phase == 0 ? static_cast<double>(k_arms)
                                         : ucbe_complexity(p.stats(), phase);
    const double exploration = opts.exploration_scale * n / complexity;
    const std::uint64_t end = phase + 1 < k_arms ? schedule.boundary(phase + 1) : budget;

    for (std::uint64_t t = p.stats().total_rounds(); t < end; ++t) {
      std::size_t pick = 0;
      double best_score = -std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < k_arms; ++i) {
        const ArmIndex arm{i};
        const std::uint64_t s = p.stats().pulls(arm);
        const double mean = s > 0 ? p.stats().mean(arm) : 0.0;
        const double score = ucbe_score(mean, s, exploration);
        if (score > best_score) {
          best_score = score;
          pick = i;
        }
      }
      p.pull(ArmIndex{pick});
    }
  }
  return p.finish(recommend(p.stats()));
}

// ---------------------------------------------------------------------------
// Adaptive UGapE

struct UgapeIndex {
  std::vector<double> upper;
  std::vector<double> lower;
  std::vector<double> index;  // B_k
  ArmIndex l;                 // argmin_k B_k
  ArmIndex u;                 // argmax_{k != l} U_k
};

/// B_k = max_{i != k} U_i - L_k; l = argmin B; u = argmax_{k != l} U. Ties go
/// to the lowest index.
inline UgapeIndex ugape_index_from_bounds(std::vector<double> upper, std::vector<double> lower) {
  const std::size_t k = upper.size();
  if (k < 2 || lower.size() != k) throw InvalidProblemError("UGapE needs >= 2 matching bounds");

  // Top two upper bounds give max_{i != k} U_i in O(1) per arm.
  std::size_t top = 0;
  for (std::size_t i = 1; i < k; ++i) {
    if (upper[i] > upper[top]) top = i;
  }
  double runner_up = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < k; ++i) {
    if (i != top) runner_up = std::max(runner_up, upper[i]);
  }

  UgapeIndex out;
  out.index.resize(k);
  std::size_t l = 0;
  for (std::size_t i = 0; i < k; ++i) {
    out.index[i] = (i == top ? runner_up : upper[top]) - lower[i];
    if (out.index[i] < out.index[l]) l = i;
  }
  std::size_t u = l == 0 ? 1 : 0;
  for (std::size_t i = 0; i < k; ++i) {
    if (i != l && upper[i] > upper[u]) u = i;
  }
  out.upper = std::move(upper);
  out.lower = std::move(lower);
  out.l = ArmIndex{l};
  out.u = ArmIndex{u};
  return out;
}

/// beta_k = sqrt(a / T_k).
inline double ugape_confidence(double exploration, std::uint64_t pulls) {
  return std::sqrt(exploration / static_cast<double>(pulls));
}

inline UgapeIndex ugape_index(const BanditStats& stats, double exploration) {
  const std::size_t k = stats.arm_count();
  std::vector<double> upper(k), lower(k);
  for (std::size_t i = 0; i < k; ++i) {
    const ArmIndex arm{i};
    const double m = stats.mean(arm);  // throws on unpulled arms
    const double beta = ugape_confidence(exploration, stats.pulls(arm));
    upper[i] = m + beta;
    lower[i] = m - beta;
  }
  return ugape_index_from_bounds(std::move(upper), std::move(lower));
}

/// H = sum_k max(gap_k / 2, eps)^-2 with gap_k the distance to the best
/// empirical mean; the best arm uses its distance to the runner-up.
inline double ugape_complexity(const BanditStats& stats) {
  const std::size_t k = stats.arm_count();
  std::vector<double> means(k);
  std::size_t best = 0;
  for (std::size_t i = 0; i < k; ++i) {
    means[i] = stats.mean(ArmIndex{i});
    if (means[i] > means[best]) best = i;
  }
  double second = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < k; ++i) {
    if (i != best) second = std::max(second, means[i]);
  }
  double h = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const double gap = i == best ? means[best] - second : means[best] - means[i];
    const double half = std::max(gap / 2.0, kGapFloor);
    h += 1.0 / (half * half);
  }
  return h;
}

/// a = max((n - K) / H, eps_a).
inline double ugape_exploration(const BanditStats& stats, std::uint64_t budget) {
  const double spare = static_cast<double>(budget - stats.arm_count());
  return std::max(spare / ugape_complexity(stats), kMinExploration);
}

/// Pulls every arm once, then each round pulls whichever of l_t, u_t has the
/// wider confidence interval (lower index on ties), re-deriving the
/// exploration parameter from the current complexity estimate.
template <RewardEnvironment Env>
RunResult run_adaptive_ugape(Env& env, std::uint64_t budget, Rng& rng,
                             const RunOptions& opts = {}) {
  const std::size_t k_arms = env.arm_count();
  detail::check_problem(k_arms, budget);
  detail::Puller<Env> p(env, rng, opts);

  for (std::size_t i = 0; i < k_arms; ++i) p.pull(ArmIndex{i});
  for (std::uint64_t t = k_arms; t < budget; ++t) {
    const double a = opts.exploration_scale * ugape_exploration(p.stats(), budget);
    const UgapeIndex idx = ugape_index(p.stats(), a);
    const double beta_l = ugape_confidence(a, p.stats().pulls(idx.l));
    const double beta_u = ugape_confidence(a, p.stats().pulls(idx.u));
    ArmIndex pick;
    if (beta_l == beta_u) {
      pick = std::min(idx.l, idx.u);
    } else {
      pick = beta_l > beta_u ? idx.l : idx.u;
    }
    p.pull(pick);
  }
  return p.finish(recommend(p.stats()));
}

// ---------------------------------------------------------------------------

template <RewardEnvironment Env>
RunResult run_policy(Policy policy, Env& env, std::uint64_t budget, Rng& rng,
                     const RunOptions& opts = {}) {
  switch (policy) {
    case Policy::uniform: return run_uniform(env, budget, rng, opts);
    case Policy::successive_rejects: return run_successive_rejects(env, budget, rng, opts);
    case Policy::ucbe_auto: return run_adaptive_ucbe(env, budget, rng, opts);
    case Policy::ugape_auto: return run_adaptive_ugape(env, budget, rng, opts);
  }
  throw InvalidProblemError("unknown policy");
}

}  // namespace membai
