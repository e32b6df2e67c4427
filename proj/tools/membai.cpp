// membai: memory-architecture best-arm identification from the command line.

#include <algorithm>
#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <type_traits>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "membai/membai.hpp"

namespace {

using namespace membai;

struct CommonFlags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> policies;
  std::optional<std::string> multipliers;
  std::optional<std::uint64_t> reps;
  std::optional<std::string> format;
  std::optional<std::string> out;
  std::optional<std::string> normalizer;
  std::optional<std::string> weights;
  std::optional<unsigned> threads;
  bool timing = false;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config, "key = value configuration file");
  cmd->add_option("--seed", f.seed, "master seed");
  cmd->add_option("--policies", f.policies, "comma list of uniform,sr,ucbe_auto,ugape_auto");
  cmd->add_option("--multipliers", f.multipliers, "comma list of budget multipliers");
  cmd->add_option("--reps", f.reps, "repetitions per cell");
  cmd->add_option("--format", f.format, "csv or json");
  cmd->add_option("--out", f.out, "output path (default stdout)");
  cmd->add_option("--normalizer", f.normalizer, "fixed or running");
  cmd->add_option("--weights", f.weights, "w_t,w_pdyn");
  cmd->add_option("--threads", f.threads, "worker threads for repetitions");
  cmd->add_flag("--timing", f.timing, "report wall-clock time per cell");
}

ExperimentConfig resolve(const CommonFlags& f) {
  ExperimentConfig c = f.config.empty() ? ExperimentConfig{} : load_config(f.config);
  if (f.seed) c.seed = *f.seed;
  if (f.policies) c.policies = parse_policies(*f.policies);
  if (f.multipliers) c.multipliers = detail::parse_reals("multipliers", *f.multipliers);
  if (f.reps) c.reps = *f.reps;
  if (f.format) c.format = parse_format(*f.format);
  if (f.out) c.out = *f.out;
  if (f.normalizer) c.normalizer = parse_normalizer(*f.normalizer);
  if (f.weights) c.weights = parse_weights(*f.weights);
  if (f.threads) c.threads = *f.threads;
  if (f.timing) c.record_wall_time = true;
  c.validate();
  return c;
}

std::string arch_fields(const MemoryArchitecture& a) {
  std::ostringstream s;
  s << a.n_banks << ',' << a.n_subbanks << ',' << a.n_mats << ',' << a.n_rows << ','
    << a.n_cols;
  return s.str();
}

nlohmann::ordered_json arch_json(const MemoryArchitecture& a) {
  return {{"n_banks", a.n_banks}, {"n_subbanks", a.n_subbanks}, {"n_mats", a.n_mats},
          {"n_rows", a.n_rows},   {"n_cols", a.n_cols}};
}

std::string sci(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6e", v);
  return buf;
}

void cmd_enumerate(const ExperimentConfig& c) {
  const auto arms = config_arms(c);
  const double vmax = *std::max_element(c.tech.supply_levels.begin(), c.tech.supply_levels.end());
  const auto theta = nominal_sample(c.tech, vmax);
  if (c.format == ReportFormat::csv) {
    std::string out = "arm_index,n_banks,n_subbanks,n_mats,n_rows,n_cols\n";
    for (std::size_t i = 0; i < arms.size(); ++i) {
      out += std::to_string(i) + ',' + arch_fields(arms[i]) + '\n';
    }
    write_text(c.out, out);
    return;
  }
  auto j = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < arms.size(); ++i) {
    const auto m = evaluate(compute_loads(arms[i], c.tech), theta, c.tech);
    nlohmann::ordered_json e;
    e["arm_index"] = i;
    e.update(arch_json(arms[i]));
    e["nominal_t_acc_s"] = m.t_acc;
    e["nominal_p_dyn_j"] = m.p_dyn;
    j.push_back(std::move(e));
  }
  write_text(c.out, j.dump(2) + '\n');
}

void cmd_golden(const ExperimentConfig& c) {
  with_environment(c, [&](auto env) {
    Rng rng(derive_seed(c.seed, kGoldenPolicyId, 0, 0));
    const auto g = golden_arm(env, c.baseline_pulls, rng);
    if (c.format == ReportFormat::csv) {
      std::string out = "# golden_arm=" + std::to_string(g.golden.value) +
                        " pulls_per_arm=" + std::to_string(g.pulls_per_arm) +
                        " total_pulls=" + std::to_string(g.total_pulls) + "\narm,mean_reward\n";
      for (std::size_t i = 0; i < g.means.size(); ++i) {
        out += std::to_string(i) + ',' + sci(g.means[i]) + '\n';
      }
      write_text(c.out, out);
      return;
    }
    nlohmann::ordered_json j;
    j["golden_arm"] = g.golden.value;
    j["pulls_per_arm"] = g.pulls_per_arm;
    j["total_pulls"] = g.total_pulls;
    j["means"] = g.means;
    write_text(c.out, j.dump(2) + '\n');
  });
}

void cmd_explore(const ExperimentConfig& c, const std::string& policy_text,
                 std::optional<double> multiplier, bool trace) {
  const Policy policy = parse_policy(policy_text);
  const double m = multiplier.value_or(c.multipliers.front());
  if (!(m >= 1.0)) throw ConfigError("--multiplier: must be >= 1");
  with_environment(c, [&](auto env) {
    const auto budget = budget_for(m, env.arm_count());
    Rng rng(derive_seed(c.seed, policy_id(policy), 0, 0));
    RunOptions opts;
    opts.record_trace = trace;
    const RunResult r = run_policy(policy, env, budget, rng, opts);
    nlohmann::ordered_json j;
    j["policy"] = std::string(policy_name(policy));
    j["arm_count"] = env.arm_count();
    j["budget"] = budget;
    j["total_pulls"] = r.stats.total_rounds();
    j["recommended"] = r.recommended.value;
    if constexpr (std::is_same_v<decltype(env), MemoryEnvironment>) {
      j["architecture"] = arch_json(env.arms()[r.recommended.value]);
    }
    j["recommended_mean"] = r.stats.mean(r.recommended);
    if (trace) {
      std::vector<std::size_t> t;
      t.reserve(r.trace.size());
      for (auto a : r.trace) t.push_back(a.value);
      j["trace"] = t;
    }
    write_text(c.out, j.dump(2) + '\n');
  });
}

void cmd_bench(const ExperimentConfig& c) {
  with_environment(c, [&](auto env) {
    export_report(run_experiment(env, c), c.format, c.out);
  });
}

/// Each BAI policy against uniform on a synthetic bed with a known best arm.
int cmd_validate(ExperimentConfig c, bool user_arms) {
  if (!user_arms || c.synthetic_arms.size() < 2) {
    c.synthetic_arms = SyntheticEnvironment::linear_gaussian(20, 0.25, 0.75, 0.3).arms();
  }
  c.environment = EnvironmentKind::synthetic;
  c.paired_seeds = true;
  c.multipliers = {20.0};
  const SyntheticEnvironment env(c.synthetic_arms);
  std::size_t best = 0;
  for (std::size_t i = 1; i < c.synthetic_arms.size(); ++i) {
    if (c.synthetic_arms[i].mean > c.synthetic_arms[best].mean) best = i;
  }
  GoldenResult g;
  g.golden = ArmIndex{best};
  c.policies = {Policy::uniform, Policy::successive_rejects, Policy::ucbe_auto,
                Policy::ugape_auto};
  const auto report = run_experiment(env, c, g);
  const auto& uni = report.cell(Policy::uniform, 20.0);
  int failures = 0;
  std::string out;
  for (Policy p : {Policy::successive_rejects, Policy::ucbe_auto, Policy::ugape_auto}) {
    const auto& cell = report.cell(p, 20.0);
    const bool ok = cell.ratio > uni.ratio;
    failures += ok ? 0 : 1;
    char line[160];
    std::snprintf(line, sizeof line, "%s %-10s ratio %.4f (se %.4f) vs uniform %.4f (se %.4f)\n",
                  ok ? "PASS" : "FAIL", std::string(policy_name(p)).c_str(), cell.ratio,
                  cell.stderr_, uni.ratio, uni.stderr_);
    out += line;
  }
  write_text(c.out, out);
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Best-arm identification over memory architectures under process variation"};
  app.require_subcommand(1);

  CommonFlags f_enum, f_golden, f_explore, f_bench, f_validate;
  auto* enumerate = app.add_subcommand("enumerate", "list the architectures of the design space");
  add_common(enumerate, f_enum);

  auto* golden = app.add_subcommand("golden", "pull every arm equally to find the golden arm");
  add_common(golden, f_golden);
  std::optional<std::uint64_t> pulls;
  golden->add_option("--pulls", pulls, "pulls per arm (default: baseline_pulls)");

  auto* explore = app.add_subcommand("explore", "run one policy once");
  add_common(explore, f_explore);
  std::string policy = "sr";
  std::optional<double> multiplier;
  bool trace = false;
  explore->add_option("--policy", policy, "uniform, sr, ucbe_auto or ugape_auto");
  explore->add_option("--multiplier", multiplier, "budget multiplier (default: first configured)");
  explore->add_flag("--trace", trace, "include the pull sequence");

  auto* bench = app.add_subcommand("bench", "accuracy experiment over policies and budgets");
  add_common(bench, f_bench);

  auto* validate = app.add_subcommand("validate", "BAI self-test on a synthetic bed");
  add_common(validate, f_validate);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*enumerate) {
      cmd_enumerate(resolve(f_enum));
    } else if (*golden) {
      auto c = resolve(f_golden);
      if (pulls) {
        if (*pulls < 1) throw ConfigError("--pulls: must be >= 1");
        c.baseline_pulls = *pulls;
      }
      cmd_golden(c);
    } else if (*explore) {
      cmd_explore(resolve(f_explore), policy, multiplier, trace);
    } else if (*bench) {
      cmd_bench(resolve(f_bench));
    } else if (*validate) {
      ExperimentConfig c = resolve(f_validate);
      const bool user_arms = c.environment == EnvironmentKind::synthetic;
      if (!f_validate.reps) c.reps = std::min<std::uint64_t>(c.reps, 1000);
      return cmd_validate(c, user_arms);
    }
  } catch (const Error& e) {
    std::cerr << "membai: " << e.what() << '\n';
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "membai: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
