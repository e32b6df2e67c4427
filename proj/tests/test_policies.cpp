#include <gtest/gtest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "membai/bandit/policies.hpp"
#include "membai/mc/synthetic_env.hpp"

using namespace membai;

namespace {

constexpr std::array kAllPolicies{Policy::uniform, Policy::successive_rejects, Policy::ucbe_auto,
                                  Policy::ugape_auto};

SyntheticEnvironment constants(std::vector<double> v) {
  std::vector<ArmSpec> arms;
  for (double x : v) arms.push_back(ArmSpec::constant(x));
  return SyntheticEnvironment(std::move(arms));
}

/// Rewards are multiples of 1/8 in [0, 2) drawn around a per-arm centre, so
/// every sum is exact in double precision.
class DyadicEnv {
 public:
  DyadicEnv(std::vector<int> centres, double shift) : centres_(std::move(centres)), shift_(shift) {}
  std::size_t arm_count() const { return centres_.size(); }
  double pull(ArmIndex a, Rng& rng) const {
    std::uniform_int_distribution<int> d(-4, 4);
    return shift_ + static_cast<double>(centres_[a.value] + d(rng)) / 8.0;
  }

 private:
  std::vector<int> centres_;
  double shift_;
};

std::vector<std::size_t> trace_of(const RunResult& r) {
  std::vector<std::size_t> t;
  for (auto a : r.trace) t.push_back(a.value);
  return t;
}

RunResult run_traced(Policy p, auto& env, std::uint64_t n, std::uint64_t seed) {
  Rng rng(seed);
  RunOptions o;
  o.record_trace = true;
  return run_policy(p, env, n, rng, o);
}

// --- Straight-line transcriptions used as trace oracles --------------------

struct Tally {
  std::vector<double> sum;
  std::vector<std::uint64_t> cnt;
  std::vector<std::size_t> trace;
  explicit Tally(std::size_t k) : sum(k, 0.0), cnt(k, 0) {}
  double mean(std::size_t i) const { return sum[i] / static_cast<double>(cnt[i]); }
  template <class Env>
  void pull(Env& env, Rng& rng, std::size_t i) {
    sum[i] += env.pull(ArmIndex{i}, rng);
    ++cnt[i];
    trace.push_back(i);
  }
  std::size_t best() const {
    std::size_t b = 0;
    for (std::size_t i = 1; i < sum.size(); ++i) {
      if (mean(i) > mean(b)) b = i;
    }
    return b;
  }
};

std::vector<std::uint64_t> nk_oracle(std::size_t k, std::uint64_t n) {
  long double lb = 0.5L;
  for (std::size_t i = 2; i <= k; ++i) lb += 1.0L / static_cast<long double>(i);
  std::vector<std::uint64_t> out{0};
  for (std::size_t j = 1; j < k; ++j) {
    out.push_back(static_cast<std::uint64_t>(
        std::ceil(static_cast<long double>(n - k) / (lb * static_cast<long double>(k + 1 - j)))));
  }
  return out;
}

template <class Env>
std::vector<std::size_t> sr_oracle(Env env, std::uint64_t n, std::uint64_t seed) {
  const std::size_t k = env.arm_count();
  const auto nk = nk_oracle(k, n);
  Rng rng(seed);
  Tally t(k);
  std::vector<bool> alive(k, true);
  for (std::size_t ph = 1; ph < k; ++ph) {
    for (std::size_t i = 0; i < k; ++i) {
      if (!alive[i]) continue;
      for (std::uint64_t d = nk[ph - 1]; d < nk[ph]; ++d) t.pull(env, rng, i);
    }
    std::size_t worst = k;
    for (std::size_t i = 0; i < k; ++i) {
      if (alive[i] && (worst == k || t.mean(i) <= t.mean(worst))) worst = i;
    }
    alive[worst] = false;
  }
  return t.trace;
}

template <class Env>
std::vector<std::size_t> ucbe_oracle(Env env, std::uint64_t n, std::uint64_t seed) {
  const std::size_t k = env.arm_count();
  const auto nk = nk_oracle(k, n);
  std::vector<std::uint64_t> tk(k + 1, n);  // tk[j] = t_j, tk[K] = n
  tk[0] = 0;
  for (std::size_t j = 1; j < k; ++j) {
    std::uint64_t s = 0;
    for (std::size_t q = 1; q < j; ++q) s += nk[q];
    tk[j] = s + (k - j + 1) * nk[j];
  }
  Rng rng(seed);
  Tally t(k);
  double h = static_cast<double>(k);
  std::size_t phase = 0;
  for (std::uint64_t r = 0; r < n; ++r) {
    while (phase + 1 < k && r >= tk[phase + 1]) {
      ++phase;
      std::vector<double> gaps;
      const double top = t.mean(t.best());
      for (std::size_t i = 0; i < k; ++i) gaps.push_back(std::max(top - t.mean(i), 1e-9));
      std::sort(gaps.begin(), gaps.end());
      h = 0.0;
      for (std::size_t i = k - phase + 1; i <= k; ++i) {
        h = std::max(h, static_cast<double>(i) / (gaps[i - 1] * gaps[i - 1]));
      }
    }
    const double b = static_cast<double>(n) / h;
    std::size_t pick = 0;
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < k; ++i) {
      const double s = t.cnt[i] == 0 ? std::numeric_limits<double>::infinity()
                                     : t.mean(i) + std::sqrt(b / static_cast<double>(t.cnt[i]));
      if (s > best) {
        best = s;
        pick = i;
      }
    }
    t.pull(env, rng, pick);
  }
  return t.trace;
}

template <class Env>
std::vector<std::size_t> ugape_oracle(Env env, std::uint64_t n, std::uint64_t seed) {
  const std::size_t k = env.arm_count();
  Rng rng(seed);
  Tally t(k);
  for (std::size_t i = 0; i < k; ++i) t.pull(env, rng, i);
  for (std::uint64_t r = k; r < n; ++r) {
    const std::size_t top = t.best();
    double second = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < k; ++i) {
      if (i != top) second = std::max(second, t.mean(i));
    }
    double h = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      const double gap = i == top ? t.mean(top) - second : t.mean(top) - t.mean(i);
      const double half = std::max(gap / 2.0, 1e-9);
      h += 1.0 / (half * half);
    }
    const double a = std::max(static_cast<double>(n - k) / h, 1e-12);
    std::vector<double> beta(k), u(k), l(k);
    for (std::size_t i = 0; i < k; ++i) {
      beta[i] = std::sqrt(a / static_cast<double>(t.cnt[i]));
      u[i] = t.mean(i) + beta[i];
      l[i] = t.mean(i) - beta[i];
    }
    std::size_t lt = 0;
    double lb = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < k; ++i) {
      double m = -std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < k; ++j) {
        if (j != i) m = std::max(m, u[j]);
      }
      if (m - l[i] < lb) {
        lb = m - l[i];
        lt = i;
      }
    }
    std::size_t ut = k;
    for (std::size_t i = 0; i < k; ++i) {
      if (i != lt && (ut == k || u[i] > u[ut])) ut = i;
    }
    std::size_t pick;
    if (beta[lt] == beta[ut]) {
      pick = std::min(lt, ut);
    } else {
      pick = beta[lt] > beta[ut] ? lt : ut;
    }
    t.pull(env, rng, pick);
  }
  return t.trace;
}

}  // namespace

// --- Uniform ---------------------------------------------------------------

TEST(Uniform, RoundRobinCounts) {
  auto env4 = constants({0, 0, 0, 0});
  Rng rng(1);
  const auto r4 = run_uniform(env4, 100, rng);
  for (auto c : r4.stats.pull_counts()) EXPECT_EQ(c, 25u);

  auto env3 = constants({0, 0, 0});
  const auto r3 = run_uniform(env3, 100, rng);
  EXPECT_EQ(r3.stats.pulls(ArmIndex{0}), 34u);
  EXPECT_EQ(r3.stats.pulls(ArmIndex{1}), 33u);
  EXPECT_EQ(r3.stats.pulls(ArmIndex{2}), 33u);
}

TEST(Uniform, DominantArm) {
  auto env = constants({0.0, 1.0});
  Rng rng(1);
  EXPECT_EQ(run_uniform(env, 10, rng).recommended, ArmIndex{1});
}

// --- Successive Rejects ----------------------------------------------------

TEST(SuccessiveRejects, DominantArm) {
  auto env = constants({1.0, 0.0});
  for (std::uint64_t n : {2u, 3u, 10u, 57u}) {
    Rng rng(1);
    EXPECT_EQ(run_successive_rejects(env, n, rng).recommended, ArmIndex{0});
  }
}

TEST(SuccessiveRejects, EliminatesInOrderOfMeans) {
  auto env = constants({0.1, 0.2, 0.3, 0.4});
  Rng rng(1);
  const auto r = run_successive_rejects(env, 100, rng);
  ASSERT_EQ(r.rejected.size(), 3u);
  EXPECT_EQ(r.rejected[0], ArmIndex{0});
  EXPECT_EQ(r.rejected[1], ArmIndex{1});
  EXPECT_EQ(r.rejected[2], ArmIndex{2});
  EXPECT_EQ(r.recommended, ArmIndex{3});
  EXPECT_EQ(r.stats.total_rounds(), 99u);
  // Survivors of phase k hold exactly n_k pulls.
  EXPECT_EQ(r.stats.pulls(ArmIndex{0}), 16u);
  EXPECT_EQ(r.stats.pulls(ArmIndex{1}), 21u);
  EXPECT_EQ(r.stats.pulls(ArmIndex{2}), 31u);
  EXPECT_EQ(r.stats.pulls(ArmIndex{3}), 31u);
}

TEST(SuccessiveRejects, AllEqualKeepsLowestIndex) {
  auto env = constants({0.5, 0.5, 0.5});
  Rng rng(1);
  EXPECT_EQ(run_successive_rejects(env, 30, rng).recommended, ArmIndex{0});
}

// --- UCB-E -----------------------------------------------------------------

TEST(Ucbe, Score) {
  EXPECT_DOUBLE_EQ(ucbe_score(0.5, 4, 1.0), 1.0);
  EXPECT_EQ(ucbe_score(-3.0, 0, 1.0), std::numeric_limits<double>::infinity());
  EXPECT_DOUBLE_EQ(ucbe_score(0.3, 9, 0.0), 0.3);
}

TEST(Ucbe, ComplexityExamples) {
  const std::vector<double> means{0.9, 0.5, 0.4, 0.1};
  const auto s = BanditStats::from_means(means);
  EXPECT_NEAR(ucbe_complexity(s, 1), 6.25, 1e-12);
  EXPECT_NEAR(ucbe_complexity(s, 3), 12.5, 1e-12);

  const std::vector<double> flat{0.2, 0.2, 0.2, 0.2};
  EXPECT_DOUBLE_EQ(ucbe_complexity(BanditStats::from_means(flat), 4), 4.0 / (1e-9 * 1e-9));

  EXPECT_THROW(ucbe_complexity(s, 0), InvalidProblemError);
  EXPECT_THROW(ucbe_complexity(BanditStats(3), 1), IncompleteExplorationError);
}

TEST(Ucbe, DominantArmAndMinimalBudget) {
  auto env = constants({1.0, 0.0});
  Rng rng(1);
  EXPECT_EQ(run_adaptive_ucbe(env, 10, rng).recommended, ArmIndex{0});

  auto env4 = constants({0.3, 0.9, 0.1, 0.5});
  const auto r = run_adaptive_ucbe(env4, 4, rng);
  for (auto c : r.stats.pull_counts()) EXPECT_EQ(c, 1u);
  EXPECT_EQ(r.recommended, ArmIndex{1});
}

// --- UGapE -----------------------------------------------------------------

TEST(Ugape, IndexExample) {
  const auto idx = ugape_index_from_bounds({1.0, 0.8, 0.6}, {0.5, 0.4, 0.3});
  EXPECT_NEAR(idx.index[0], 0.3, 1e-15);
  EXPECT_NEAR(idx.index[1], 0.6, 1e-15);
  EXPECT_NEAR(idx.index[2], 0.7, 1e-15);
  EXPECT_EQ(idx.l, ArmIndex{0});
  EXPECT_EQ(idx.u, ArmIndex{1});
}

TEST(Ugape, SymmetricTie) {
  const auto idx = ugape_index_from_bounds({0.7, 0.7}, {0.2, 0.2});
  EXPECT_EQ(idx.index[0], idx.index[1]);
  EXPECT_EQ(idx.l, ArmIndex{0});
  EXPECT_EQ(idx.u, ArmIndex{1});
}

TEST(Ugape, Confidence) {
  EXPECT_DOUBLE_EQ(ugape_confidence(4.0, 16), 0.5);
  const std::vector<double> means{0.6, 0.2};
  const auto s = BanditStats::from_means(means);
  const auto idx = ugape_index(s, 0.25);
  EXPECT_DOUBLE_EQ(idx.upper[0], 1.1);
  EXPECT_DOUBLE_EQ(idx.lower[1], -0.3);
}

TEST(Ugape, ComplexityUsesRunnerUpGapForBestArm) {
  const std::vector<double> means{0.9, 0.5, 0.1};
  // gaps (0.4, 0.4, 0.8) halved: (0.2, 0.2, 0.4)
  EXPECT_NEAR(ugape_complexity(BanditStats::from_means(means)), 25.0 + 25.0 + 6.25, 1e-9);
  EXPECT_NEAR(ugape_exploration(BanditStats::from_means(means), 59), 56.0 / 56.25, 1e-12);
}

TEST(Ugape, DominantArm) {
  auto env = constants({1.0, 0.0});
  Rng rng(1);
  EXPECT_EQ(run_adaptive_ugape(env, 10, rng).recommended, ArmIndex{0});
}

TEST(Ugape, IdenticalArmsNotStructurallyFavoured) {
  const auto env = SyntheticEnvironment::linear_gaussian(3, 0.5, 0.5, 1.0);
  std::array<int, 3> wins{};
  for (int rep = 0; rep < 1000; ++rep) {
    Rng rng(1000 + rep);
    auto e = env;
    ++wins[run_adaptive_ugape(e, 30, rng).recommended.value];
  }
  for (int w : wins) EXPECT_LE(w, 600);
}

// --- Cross-policy properties -----------------------------------------------

TEST(Policies, RejectInvalidProblems) {
  auto one = constants({1.0});
  auto two = constants({1.0, 0.0});
  for (Policy p : kAllPolicies) {
    Rng rng(1);
    EXPECT_THROW(run_policy(p, one, 5, rng), InvalidProblemError);
    EXPECT_THROW(run_policy(p, two, 1, rng), InsufficientBudgetError);
  }
}

TEST(Policies, BudgetAccounting) {
  for (std::size_t k : {2u, 3u, 5u, 8u, 13u}) {
    const auto env = SyntheticEnvironment::linear_gaussian(k, 0.0, 1.0, 0.5);
    for (std::uint64_t n : {k, k + 1, 2 * k + 1, 10 * k, 37 * k + 3}) {
      for (Policy p : kAllPolicies) {
        auto e = env;
        const auto r = run_traced(p, e, n, 7 * n + k);
        const auto used = r.stats.total_rounds();
        EXPECT_EQ(used, r.trace.size());
        EXPECT_LE(used, n) << policy_name(p) << " K=" << k << " n=" << n;
        if (p == Policy::successive_rejects) {
          // The ceiling formula itself can leave exactly K rounds unused
          // (K=2, n=20 gives n_1=9, 18 pulls).
          EXPECT_GE(used + k, n) << " K=" << k << " n=" << n;
        } else {
          EXPECT_EQ(used, n) << policy_name(p);
        }
        EXPECT_TRUE(r.stats.all_pulled());
      }
    }
  }
}

TEST(Policies, Deterministic) {
  const auto env = SyntheticEnvironment::linear_gaussian(9, 0.0, 1.0, 0.4);
  for (Policy p : kAllPolicies) {
    auto e1 = env;
    auto e2 = env;
    const auto a = run_traced(p, e1, 200, 42);
    const auto b = run_traced(p, e2, 200, 42);
    EXPECT_EQ(trace_of(a), trace_of(b)) << policy_name(p);
    EXPECT_EQ(a.recommended, b.recommended);
  }
}

TEST(Policies, ShiftEquivariantTraces) {
  const std::vector<int> centres{3, 5, 6, 2, 6, 4, 1};
  for (Policy p : kAllPolicies) {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
      DyadicEnv base(centres, 0.0);
      DyadicEnv shifted(centres, 2.0);
      const auto a = run_traced(p, base, 150, seed);
      const auto b = run_traced(p, shifted, 150, seed);
      EXPECT_EQ(trace_of(a), trace_of(b)) << policy_name(p) << " seed " << seed;
      EXPECT_EQ(a.recommended, b.recommended);
    }
  }
}

TEST(Policies, MatchStraightLineOracles) {
  const std::vector<int> centres{3, 5, 6, 2, 6, 4, 1};
  for (std::uint64_t n : {8u, 20u, 71u, 150u}) {
    for (std::uint64_t seed : {11u, 12u}) {
      DyadicEnv env(centres, 0.0);
      EXPECT_EQ(trace_of(run_traced(Policy::successive_rejects, env, n, seed)),
                sr_oracle(env, n, seed))
          << "n=" << n;
      EXPECT_EQ(trace_of(run_traced(Policy::ucbe_auto, env, n, seed)), ucbe_oracle(env, n, seed))
          << "n=" << n;
      EXPECT_EQ(trace_of(run_traced(Policy::ugape_auto, env, n, seed)),
                ugape_oracle(env, n, seed))
          << "n=" << n;
    }
  }
  // Deterministic rewards.
  auto det = constants({0.25, 0.75, 0.5, 0.625});
  EXPECT_EQ(trace_of(run_traced(Policy::successive_rejects, det, 40, 1)), sr_oracle(det, 40, 1));
  EXPECT_EQ(trace_of(run_traced(Policy::ucbe_auto, det, 40, 1)), ucbe_oracle(det, 40, 1));
  EXPECT_EQ(trace_of(run_traced(Policy::ugape_auto, det, 40, 1)), ugape_oracle(det, 40, 1));
}

TEST(Policies, AdaptiveBeatUniformOnSeparatedBed) {
  // K=4, n=100, means 0.2..0.8, sd 0.1; paired seeds.
  const auto env = SyntheticEnvironment::linear_gaussian(4, 0.2, 0.8, 0.1);
  std::array<int, 4> correct{};
  for (int rep = 0; rep < 1000; ++rep) {
    for (std::size_t i = 0; i < kAllPolicies.size(); ++i) {
      Rng rng(5000 + rep);
      auto e = env;
      correct[i] += run_policy(kAllPolicies[i], e, 100, rng).recommended == ArmIndex{3};
    }
  }
  EXPECT_GE(correct[2], correct[0]);
  EXPECT_GE(correct[3], correct[0]);
}
