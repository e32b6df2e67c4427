#pragma once

// Golden-arm baseline and repeated seeded policy runs.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <exception>
#include <string>
#include <thread>
#include <vector>

#include "membai/bandit/policies.hpp"
#include "membai/design_space.hpp"
#include "membai/harness/config.hpp"
#include "membai/harness/seed.hpp"
#include "membai/mc/memory_env.hpp"
#include "membai/mc/synthetic_env.hpp"

namespace membai {

struct GoldenResult {
  ArmIndex golden{0};
  std::vector<double> means;
  std::uint64_t pulls_per_arm = 0;
  std::uint64_t total_pulls = 0;
};

/// Pulls every arm `pulls_per_arm` times in round-robin order and returns
/// the empirical best (lowest index on ties) with the full mean table.
template <RewardEnvironment Env>
GoldenResult golden_arm(Env env, std::uint64_t pulls_per_arm, Rng& rng) {
  if (pulls_per_arm < 1) throw InvalidProblemError("pulls_per_arm must be >= 1");
  const std::size_t k = env.arm_count();
  const RunResult run = run_uniform(env, pulls_per_arm * k, rng);
  GoldenResult g;
  g.golden = run.recommended;
  g.pulls_per_arm = pulls_per_arm;
  g.total_pulls = run.stats.total_rounds();
  g.means.reserve(k);
  for (std::size_t i = 0; i < k; ++i) g.means.push_back(run.stats.mean(ArmIndex{i}));
  return g;
}

inline std::uint32_t policy_id(Policy p) noexcept { return static_cast<std::uint32_t>(p); }

/// Total pull budget for multiplier m on K arms: round(m K).
inline std::uint64_t budget_for(double multiplier, std::size_t arm_count) {
  return static_cast<std::uint64_t>(std::llround(multiplier * static_cast<double>(arm_count)));
}

struct AccuracyCell {
  Policy policy = Policy::uniform;
  double multiplier = 1.0;
  std::uint64_t budget = 0;
  std::uint64_t reps = 0;
  std::uint64_t correct = 0;
  double ratio = 0.0;
  double stderr_ = 0.0;
  std::uint64_t total_pulls = 0;  // largest per-run pull count
  double wall_ms = 0.0;

  bool operator==(const AccuracyCell&) const = default;
};

struct AccuracyReport {
  std::size_t arm_count = 0;
  std::uint64_t golden = 0;
  std::uint64_t golden_pulls_per_arm = 0;
  std::uint64_t seed = 0;
  std::vector<AccuracyCell> cells;  // policy-major, multipliers in config order

  const AccuracyCell& cell(Policy p, double multiplier) const {
    for (const auto& c : cells) {
      if (c.policy == p && c.multiplier == multiplier) return c;
    }
    throw InvalidProblemError("report has no cell for policy " + std::string(policy_name(p)));
  }

  bool operator==(const AccuracyReport&) const = default;
};

/// Binomial standard error of a ratio over `reps` runs.
inline double ratio_stderr(double ratio, std::uint64_t reps) {
  return std::sqrt(ratio * (1.0 - ratio) / static_cast<double>(reps));
}

namespace detail {

struct CellTally {
  std::uint64_t correct = 0;
  std::uint64_t max_pulls = 0;
};

/// Repetitions rep = first, first + stride, ... Each repetition gets its own
/// copy of the environment, so running-normalizer state never leaks between
/// runs.
template <RewardEnvironment Env>
CellTally run_strided(const Env& env, Policy policy, std::uint64_t budget, ArmIndex golden,
                      std::uint64_t master_seed, std::uint32_t seed_policy,
                      std::uint32_t mult_index, std::uint64_t first, std::uint64_t reps,
                      std::uint64_t stride) {
  CellTally t;
  for (std::uint64_t rep = first; rep < reps; rep += stride) {
    Rng rng(derive_seed(master_seed, seed_policy, mult_index, rep));
    Env local = env;
    const RunResult r = run_policy(policy, local, budget, rng);
    t.correct += r.recommended == golden ? 1 : 0;
    t.max_pulls = std::max(t.max_pulls, r.stats.total_rounds());
  }
  return t;
}

template <RewardEnvironment Env>
CellTally run_cell(const Env& env, Policy policy, std::uint64_t budget, ArmIndex golden,
                   std::uint64_t master_seed, std::uint32_t seed_policy, std::uint32_t mult_index,
                   std::uint64_t reps, unsigned threads) {
  const unsigned workers =
      static_cast<unsigned>(std::min<std::uint64_t>(std::max(1u, threads), reps));
  if (workers == 1) {
    return run_strided(env, policy, budget, golden, master_seed, seed_policy, mult_index, 0,
                       reps, 1);
  }
  std::vector<CellTally> tallies(workers);
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        tallies[w] = run_strided(env, policy, budget, golden, master_seed, seed_policy,
                                 mult_index, w, reps, workers);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  // Sum and max commute, so the result does not depend on the worker count.
  CellTally total;
  for (const auto& t : tallies) {
    total.correct += t.correct;
    total.max_pulls = std::max(total.max_pulls, t.max_pulls);
  }
  return total;
}

}  // namespace detail

/// Runs every (policy, multiplier) cell against a known golden arm.
template <RewardEnvironment Env>
AccuracyReport run_experiment(const Env& env, const ExperimentConfig& cfg, const GoldenResult& golden) {
  cfg.validate();
  const std::size_t k = env.arm_count();
  AccuracyReport report;
  report.arm_count = k;
  report.golden = golden.golden.value;
  report.golden_pulls_per_arm = golden.pulls_per_arm;
  report.seed = cfg.seed;
  for (Policy p : cfg.policies) {
    const std::uint32_t seed_policy = cfg.paired_seeds ? 0u : policy_id(p);
    for (std::size_t mi = 0; mi < cfg.multipliers.size(); ++mi) {
      AccuracyCell cell;
      cell.policy = p;
      cell.multiplier = cfg.multipliers[mi];
      cell.budget = budget_for(cell.multiplier, k);
      cell.reps = cfg.reps;
      const auto start = std::chrono::steady_clock::now();
      const auto tally = detail::run_cell(env, p, cell.budget, golden.golden, cfg.seed, seed_policy,
                                          static_cast<std::uint32_t>(mi), cfg.reps, cfg.threads);
      const auto stop = std::chrono::steady_clock::now();
      cell.correct = tally.correct;
      cell.total_pulls = tally.max_pulls;
      cell.ratio = static_cast<double>(tally.correct) / static_cast<double>(cfg.reps);
      cell.stderr_ = ratio_stderr(cell.ratio, cfg.reps);
      if (cfg.record_wall_time) {
        // Microsecond resolution, so the value survives a JSON round trip.
        const double ms = std::chrono::duration<double, std::milli>(stop - start).count();
        cell.wall_ms = std::round(ms * 1000.0) / 1000.0;
      }
      report.cells.push_back(cell);
    }
  }
  return report;
}

/// Golden arm from `baseline_pulls` per arm, then every cell.
template <RewardEnvironment Env>
AccuracyReport run_experiment(const Env& env, const ExperimentConfig& cfg) {
  cfg.validate();
  Rng rng(derive_seed(cfg.seed, kGoldenPolicyId, 0, 0));
  return run_experiment(env, cfg, golden_arm(env, cfg.baseline_pulls, rng));
}

inline std::vector<MemoryArchitecture> config_arms(const ExperimentConfig& cfg) {
  return enumerate_architectures(cfg.ranges);
}

inline MemoryEnvironment make_memory_environment(const ExperimentConfig& cfg) {
  auto arms = config_arms(cfg);
  const Normalizer norm = cfg.normalizer == NormalizerMode::fixed
                              ? nominal_normalizer(arms, cfg.tech)
                              : Normalizer::running();
  return MemoryEnvironment(std::move(arms), cfg.tech, cfg.weights, norm, cfg.constraints,
                           cfg.penalty);
}

inline SyntheticEnvironment make_synthetic_environment(const ExperimentConfig& cfg) {
  return SyntheticEnvironment(cfg.synthetic_arms);
}

/// Calls `fn` with the environment the config describes.
template <typename Fn>
decltype(auto) with_environment(const ExperimentConfig& cfg, Fn&& fn) {
  if (cfg.environment == EnvironmentKind::synthetic) {
    return fn(make_synthetic_environment(cfg));
  }
  return fn(make_memory_environment(cfg));
}

}  // namespace membai
