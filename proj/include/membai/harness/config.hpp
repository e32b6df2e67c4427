#pragma once

// Experiment configuration: a flat `key = value` file. Blank lines and text
// after '#' are ignored; lists are comma separated.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "membai/bandit/policies.hpp"
#include "membai/design_space.hpp"
#include "membai/errors.hpp"
#include "membai/mc/memory_env.hpp"
#include "membai/mc/synthetic_env.hpp"
#include "membai/memory/cost.hpp"
#include "membai/memory/tech.hpp"

namespace membai {

enum class EnvironmentKind { memory, synthetic };
enum class ReportFormat { csv, json };

struct ExperimentConfig {
  EnvironmentKind environment = EnvironmentKind::memory;
  EnumerationRanges ranges;
  TechConfig tech;
  CostWeights weights{1.0, 0.0};
  NormalizerMode normalizer = NormalizerMode::fixed;
  Constraints constraints;
  double penalty = kDefaultPenalty;
  std::vector<ArmSpec> synthetic_arms;

  std::vector<double> multipliers{10.0, 15.0, 20.0};
  std::uint64_t baseline_pulls = 100;
  std::uint64_t reps = 1000;
  std::uint64_t seed = 1;
  std::vector<Policy> policies{Policy::uniform, Policy::successive_rejects, Policy::ucbe_auto,
                               Policy::ugape_auto};
  unsigned threads = 1;
  bool record_wall_time = false;
  bool paired_seeds = false;  // every policy reuses the same per-repetition seeds
  ReportFormat format = ReportFormat::csv;
  std::string out;  // empty: stdout

  void validate() const {
    if (reps < 1) throw ConfigError("reps: must be >= 1");
    if (baseline_pulls < 1) throw ConfigError("baseline_pulls: must be >= 1");
    if (multipliers.empty()) throw ConfigError("multipliers: at least one value required");
    if (multipliers.size() > 256) throw ConfigError("multipliers: at most 256 values");
    for (double m : multipliers) {
      if (!(m >= 1.0) || !std::isfinite(m)) {
        throw ConfigError("multipliers: every value must be >= 1, got " + std::to_string(m));
      }
    }
    if (policies.empty()) throw ConfigError("policies: at least one policy required");
    if (threads < 1) throw ConfigError("threads: must be >= 1");
    weights.validate();
    if (!(penalty >= 0.0)) throw ConfigError("lambda: must be >= 0");
    if (!(constraints.t_acc_target > 0.0)) throw ConfigError("t_acc_target_s: must be > 0");
    if (!(constraints.p_dyn_target > 0.0)) throw ConfigError("p_dyn_target_j: must be > 0");
    if (tech.supply_levels.empty()) throw ConfigError("supply_levels: at least one level");
    if (!(tech.alpha >= 1.0 && tech.alpha <= 2.0)) throw ConfigError("alpha: must lie in [1, 2]");
    if (!(tech.pc > 0 && tech.pu > 0 && tech.l_eff > 0)) {
      throw ConfigError("pc, pu, l_eff_m: must be > 0");
    }
    for (double w : tech.w_over_l) {
      if (!(w > 0)) throw ConfigError("w_over_l: every class needs a positive ratio");
    }
    if (!(tech.vth0 > 0) || !(tech.vth_sigma_ratio >= 0)) {
      throw ConfigError("vth0_volts / vth_sigma_ratio: must be positive / non-negative");
    }
    if (environment == EnvironmentKind::synthetic && synthetic_arms.size() < 2) {
      throw ConfigError("synthetic_arms: at least 2 arms required");
    }
  }
};

namespace detail {

inline std::string trim(std::string s) {
  auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

inline std::vector<std::string> split_list(const std::string& v, char sep = ',') {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, sep)) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

inline double parse_real(const std::string& key, const std::string& v) {
  std::string lower = v;
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "inf" || lower == "infinity") return std::numeric_limits<double>::infinity();
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError(key + ": expected a number, got '" + v + "'");
  }
}

inline std::uint64_t parse_count(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    if (!v.empty() && v[0] == '-') throw std::invalid_argument(v);
    const unsigned long long n = std::stoull(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return n;
  } catch (const std::exception&) {
    throw ConfigError(key + ": expected a non-negative integer, got '" + v + "'");
  }
}

inline std::vector<double> parse_reals(const std::string& key, const std::string& v) {
  std::vector<double> out;
  for (const auto& item : split_list(v)) out.push_back(parse_real(key, item));
  if (out.empty()) throw ConfigError(key + ": empty list");
  return out;
}

inline ExponentRange parse_range(const std::string& key, const std::string& v) {
  const auto parts = split_list(v);
  if (parts.size() != 2) throw ConfigError(key + ": expected 'min,max', got '" + v + "'");
  const auto lo = parse_count(key, parts[0]);
  const auto hi = parse_count(key, parts[1]);
  if (lo > hi || hi > 62) throw ConfigError(key + ": need 0 <= min <= max <= 62");
  return ExponentRange{static_cast<int>(lo), static_cast<int>(hi)};
}

inline bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError(key + ": expected true/false, got '" + v + "'");
}

}  // namespace detail

inline Policy parse_policy(const std::string& name) {
  for (Policy p : {Policy::uniform, Policy::successive_rejects, Policy::ucbe_auto,
                   Policy::ugape_auto}) {
    if (name == policy_name(p)) return p;
  }
  throw ConfigError("policies: unknown policy '" + name +
                    "' (expected uniform, sr, ucbe_auto, ugape_auto)");
}

inline std::vector<Policy> parse_policies(const std::string& v) {
  std::vector<Policy> out;
  for (const auto& item : detail::split_list(v)) out.push_back(parse_policy(item));
  if (out.empty()) throw ConfigError("policies: empty list");
  return out;
}

inline CostWeights parse_weights(const std::string& v) {
  const auto w = detail::parse_reals("weights", v);
  if (w.size() != 2) throw ConfigError("weights: expected 'w_t,w_pdyn'");
  CostWeights cw{w[0], w[1]};
  cw.validate();
  return cw;
}

inline NormalizerMode parse_normalizer(const std::string& v) {
  if (v == "fixed") return NormalizerMode::fixed;
  if (v == "running") return NormalizerMode::running;
  throw ConfigError("normalizer_mode: expected fixed or running, got '" + v + "'");
}

inline ReportFormat parse_format(const std::string& v) {
  if (v == "csv") return ReportFormat::csv;
  if (v == "json") return ReportFormat::json;
  throw ConfigError("format: expected csv or json, got '" + v + "'");
}

/// `gaussian:mean:sd` or `constant:value`.
inline ArmSpec parse_arm_spec(const std::string& v) {
  const auto parts = detail::split_list(v, ':');
  if (parts.size() == 3 && parts[0] == "gaussian") {
    const double sd = detail::parse_real("synthetic_arms", parts[2]);
    if (!(sd >= 0.0)) throw ConfigError("synthetic_arms: sd must be >= 0");
    return ArmSpec::gaussian(detail::parse_real("synthetic_arms", parts[1]), sd);
  }
  if (parts.size() == 2 && parts[0] == "constant") {
    return ArmSpec::constant(detail::parse_real("synthetic_arms", parts[1]));
  }
  throw ConfigError("synthetic_arms: expected gaussian:mean:sd or constant:value, got '" + v +
                    "'");
}

/// Applies one key. Throws ConfigError naming the key on any problem.
inline void apply_config_value(ExperimentConfig& c, const std::string& key,
                               const std::string& v) {
  using detail::parse_count;
  using detail::parse_real;
  TechConfig& t = c.tech;

  static const std::map<std::string, double TechConfig::*> tech_reals{
      {"vth0_volts", &TechConfig::vth0},
      {"vth_sigma_ratio", &TechConfig::vth_sigma_ratio},
      {"alpha", &TechConfig::alpha},
      {"pc", &TechConfig::pc},
      {"pu", &TechConfig::pu},
      {"l_eff_m", &TechConfig::l_eff},
      {"decoder_strip_m", &TechConfig::decoder_strip},
      {"sense_strip_m", &TechConfig::sense_strip},
      {"bank_overhead_area_m2", &TechConfig::bank_overhead_area},
      {"decode_fanout", &TechConfig::decode_fanout},
      {"predecode_lines", &TechConfig::predecode_lines},
      {"output_load_f", &TechConfig::output_load},
  };
  static const std::map<std::string, double WireParams::*> wire_reals{
      {"wire_r_per_m", &WireParams::r_per_len}, {"wire_c_per_m", &WireParams::c_per_len},
      {"pitch_m", &WireParams::pitch},          {"c_gate_per_m", &WireParams::c_gate},
      {"c_drain_per_m", &WireParams::c_drain},
  };

  if (auto it = tech_reals.find(key); it != tech_reals.end()) {
    t.*(it->second) = parse_real(key, v);
  } else if (auto wit = wire_reals.find(key); wit != wire_reals.end()) {
    t.wire.*(wit->second) = parse_real(key, v);
  } else if (key == "w_over_l") {
    const auto w = detail::parse_reals(key, v);
    if (w.size() != kDeviceClassCount) {
      throw ConfigError("w_over_l: expected " + std::to_string(kDeviceClassCount) + " values");
    }
    std::copy(w.begin(), w.end(), t.w_over_l.begin());
  } else if (key.rfind("w_over_l.", 0) == 0) {
    const std::string cls = key.substr(9);
    const auto it = std::find(kDeviceClassNames.begin(), kDeviceClassNames.end(), cls);
    if (it == kDeviceClassNames.end()) throw ConfigError(key + ": unknown device class");
    t.w_over_l[static_cast<std::size_t>(it - kDeviceClassNames.begin())] = parse_real(key, v);
  } else if (key == "supply_levels") {
    t.supply_levels = detail::parse_reals(key, v);
  } else if (key == "data_bits") {
    t.data_bits = static_cast<unsigned>(parse_count(key, v));
  } else if (key == "capacity_bits") {
    c.ranges.capacity_bits = parse_count(key, v);
  } else if (key == "banks_exp") {
    c.ranges.banks = detail::parse_range(key, v);
  } else if (key == "subbanks_exp") {
    c.ranges.subbanks = detail::parse_range(key, v);
  } else if (key == "mats_exp") {
    c.ranges.mats = detail::parse_range(key, v);
  } else if (key == "rows_exp") {
    c.ranges.rows = detail::parse_range(key, v);
  } else if (key == "cols_exp") {
    c.ranges.cols = detail::parse_range(key, v);
  } else if (key == "weights") {
    c.weights = parse_weights(v);
  } else if (key == "normalizer_mode") {
    c.normalizer = parse_normalizer(v);
  } else if (key == "lambda") {
    c.penalty = parse_real(key, v);
  } else if (key == "t_acc_target_s") {
    c.constraints.t_acc_target = parse_real(key, v);
  } else if (key == "p_dyn_target_j") {
    c.constraints.p_dyn_target = parse_real(key, v);
  } else if (key == "environment") {
    if (v == "memory") {
      c.environment = EnvironmentKind::memory;
    } else if (v == "synthetic") {
      c.environment = EnvironmentKind::synthetic;
    } else {
      throw ConfigError("environment: expected memory or synthetic, got '" + v + "'");
    }
  } else if (key == "synthetic_arms") {
    c.synthetic_arms.clear();
    for (const auto& item : detail::split_list(v)) c.synthetic_arms.push_back(parse_arm_spec(item));
  } else if (key == "multipliers") {
    c.multipliers = detail::parse_reals(key, v);
  } else if (key == "baseline_pulls") {
    c.baseline_pulls = parse_count(key, v);
  } else if (key == "reps") {
    c.reps = parse_count(key, v);
  } else if (key == "seed") {
    c.seed = parse_count(key, v);
  } else if (key == "policies") {
    c.policies = parse_policies(v);
  } else if (key == "threads") {
    c.threads = static_cast<unsigned>(parse_count(key, v));
  } else if (key == "record_wall_time") {
    c.record_wall_time = detail::parse_bool(key, v);
  } else if (key == "paired_seeds") {
    c.paired_seeds = detail::parse_bool(key, v);
  } else if (key == "format") {
    c.format = parse_format(v);
  } else if (key == "out") {
    c.out = v;
  } else {
    throw ConfigError("unknown config key '" + key + "'");
  }
}

inline ExperimentConfig parse_config(std::istream& in, ExperimentConfig base = {}) {
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string value = detail::trim(line.substr(eq + 1));
    try {
      apply_config_value(base, key, value);
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return base;
}

inline ExperimentConfig load_config(const std::string& path, ExperimentConfig base = {}) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  try {
    return parse_config(in, std::move(base));
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

}  // namespace membai
