#pragma once

// CSV and JSON serialization of accuracy reports. Output is byte-stable:
// fixed column and field order, fixed precision, LF line endings.

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "membai/errors.hpp"
#include "membai/harness/config.hpp"
#include "membai/harness/experiment.hpp"

namespace membai {

inline constexpr const char* kCsvHeader =
    "policy,budget_multiplier,correct_ratio,stderr,total_pulls,wall_ms";

namespace detail {

inline std::string fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

/// Shortest text that reads back to the same double.
inline std::string shortest(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline double round_to(double v, int decimals) {
  const double s = std::pow(10.0, decimals);
  return std::round(v * s) / s;
}

}  // namespace detail

inline std::string report_to_csv(const AccuracyReport& r) {
  std::string out = kCsvHeader;
  out += '\n';
  for (const auto& c : r.cells) {
    out += policy_name(c.policy);
    out += ',' + detail::shortest(c.multiplier);
    out += ',' + detail::fixed(c.ratio, 4);
    out += ',' + detail::fixed(c.stderr_, 4);
    out += ',' + std::to_string(c.total_pulls);
    out += ',' + detail::fixed(c.wall_ms, 3);
    out += '\n';
  }
  return out;
}

inline nlohmann::ordered_json report_to_json(const AccuracyReport& r) {
  nlohmann::ordered_json j;
  j["arm_count"] = r.arm_count;
  j["golden_arm"] = r.golden;
  j["golden_pulls_per_arm"] = r.golden_pulls_per_arm;
  j["seed"] = r.seed;
  auto cells = nlohmann::ordered_json::array();
  for (const auto& c : r.cells) {
    nlohmann::ordered_json e;
    e["policy"] = std::string(policy_name(c.policy));
    e["budget_multiplier"] = c.multiplier;
    e["budget"] = c.budget;
    e["reps"] = c.reps;
    e["correct"] = c.correct;
    e["correct_ratio"] = detail::round_to(c.ratio, 4);
    e["stderr"] = detail::round_to(c.stderr_, 4);
    e["total_pulls"] = c.total_pulls;
    e["wall_ms"] = detail::round_to(c.wall_ms, 3);
    cells.push_back(std::move(e));
  }
  j["cells"] = std::move(cells);
  return j;
}

/// Inverse of report_to_json. Ratio and standard error are recomputed from
/// the exact counts.
inline AccuracyReport report_from_json(const nlohmann::json& j) {
  try {
    AccuracyReport r;
    r.arm_count = j.at("arm_count").get<std::size_t>();
    r.golden = j.at("golden_arm").get<std::uint64_t>();
    r.golden_pulls_per_arm = j.at("golden_pulls_per_arm").get<std::uint64_t>();
    r.seed = j.at("seed").get<std::uint64_t>();
    for (const auto& e : j.at("cells")) {
      AccuracyCell c;
      c.policy = parse_policy(e.at("policy").get<std::string>());
      c.multiplier = e.at("budget_multiplier").get<double>();
      c.budget = e.at("budget").get<std::uint64_t>();
      c.reps = e.at("reps").get<std::uint64_t>();
      c.correct = e.at("correct").get<std::uint64_t>();
      if (c.reps < 1 || c.correct > c.reps) throw ConfigError("report: inconsistent counts");
      c.ratio = static_cast<double>(c.correct) / static_cast<double>(c.reps);
      c.stderr_ = ratio_stderr(c.ratio, c.reps);
      c.total_pulls = e.at("total_pulls").get<std::uint64_t>();
      c.wall_ms = e.at("wall_ms").get<double>();
      r.cells.push_back(c);
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("report: ") + e.what());
  }
}

inline std::string render_report(const AccuracyReport& r, ReportFormat f) {
  if (f == ReportFormat::csv) return report_to_csv(r);
  return report_to_json(r).dump(2) + '\n';
}

/// Writes `text` verbatim (binary mode, so LF stays LF). Empty path or "-"
/// means stdout.
inline void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    if (!std::cout) throw IoError("failed writing to stdout");
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << text;
  out.close();
  if (!out) throw IoError("failed writing '" + path + "'");
}

inline void export_report(const AccuracyReport& r, ReportFormat f, const std::string& path) {
  write_text(path, render_report(r, f));
}

inline AccuracyReport import_json_report(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw IoError("'" + path + "': " + e.what());
  }
  return report_from_json(j);
}

}  // namespace membai
