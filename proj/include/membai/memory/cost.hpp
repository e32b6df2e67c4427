#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "membai/errors.hpp"
#include "membai/memory/model.hpp"

namespace membai {

struct CostWeights {
  double w_t = 0.5;
  double w_pdyn = 0.5;

  /// Throws ConfigError unless both lie in [0, 1] and sum to 1.
  void validate() const {
    if (!(w_t >= 0.0 && w_t <= 1.0 && w_pdyn >= 0.0 && w_pdyn <= 1.0) ||
        std::abs(w_t + w_pdyn - 1.0) > 1e-9) {
      throw ConfigError("cost weights must lie in [0,1] and sum to 1 (got " +
                        std::to_string(w_t) + ", " + std::to_string(w_pdyn) + ")");
    }
  }
};

enum class NormalizerMode { fixed, running };

/// Reference minima that turn access time and energy into dimensionless
/// ratios. In running mode the minima track the smallest values seen so far
/// and start at +inf.
struct Normalizer {
  double min_t_acc = std::numeric_limits<double>::infinity();
  double min_p_dyn = std::numeric_limits<double>::infinity();
  NormalizerMode mode = NormalizerMode::fixed;

  static Normalizer fixed(double min_t_acc, double min_p_dyn) {
    return Normalizer{min_t_acc, min_p_dyn, NormalizerMode::fixed};
  }
  static Normalizer running() { return Normalizer{}.with_mode(NormalizerMode::running); }

  Normalizer with_mode(NormalizerMode m) const {
    Normalizer n = *this;
    n.mode = m;
    return n;
  }
};

/// Running mode: elementwise minimum with `m`. Fixed mode: unchanged.
inline Normalizer update_normalizer(Normalizer norm, const PerfMetrics& m) {
  if (norm.mode == NormalizerMode::running) {
    norm.min_t_acc = std::min(norm.min_t_acc, m.t_acc);
    norm.min_p_dyn = std::min(norm.min_p_dyn, m.p_dyn);
  }
  return norm;
}

/// w_t t_acc / min_t_acc + w_pdyn p_dyn / min_p_dyn.
inline double cost(const PerfMetrics& m, const CostWeights& w, const Normalizer& norm) {
  if (!std::isfinite(m.t_acc) || !std::isfinite(m.p_dyn) || m.t_acc <= 0.0 || m.p_dyn <= 0.0) {
    throw InfeasibleOperatingPointError("invalid sample: non-finite or non-positive metrics");
  }
  if (!(norm.min_t_acc > 0.0) || !(norm.min_p_dyn > 0.0) || !std::isfinite(norm.min_t_acc) ||
      !std::isfinite(norm.min_p_dyn)) {
    throw DomainError("normalizer minima must be finite and strictly positive");
  }
  return w.w_t * (m.t_acc / norm.min_t_acc) + w.w_pdyn * (m.p_dyn / norm.min_p_dyn);
}

}  // namespace membai
