#pragma once

#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dao/backends.hpp"

namespace dao {

struct AdaCPConfig {
  double delta = 0.1;  // miscoverage level, in (0, 1)
  double beta = 0.5;   // per-round threshold decay, in (0, 1]
  std::optional<double> ed_override = 1.0;   // used verbatim when set
  std::optional<double> eae_override = 3.0;

  void validate() const;
};

struct RiskThreshold {
  double value = std::numeric_limits<double>::infinity();  // +inf accepts everything
  int round = 0;
};

/// Split-conformal quantile: the ceil((n+1)(1-delta))-th smallest risk, or
/// +inf when that rank exceeds n. Throws EmptyCalibrationSet.
RiskThreshold calibrate(std::span<const double> risks, double delta);

/// The 1-based rank calibrate() reads, before the +inf cutoff.
std::size_t conformal_rank(std::size_t n, double delta);

/// Rejection is strict: risk == threshold is accepted.
inline bool accept(double risk, const RiskThreshold& threshold) { return risk <= threshold.value; }

inline RiskThreshold decay_threshold(const RiskThreshold& threshold, double beta) {
  return {threshold.value * beta, threshold.round + 1};
}

/// Scoring prompt: the task prompt, followed by a "Reference information:"
/// block when `retrieved` is non-empty.
std::string scoring_prompt(std::string_view input, std::string_view retrieved);

/// NLL of `answer` given input (+) retrieved. Throws BackendError.
double risk_score(ScoringBackend& scorer, std::string_view input, std::string_view retrieved,
                  std::string_view answer);

struct RiskHistogram {
  double max_risk = 0.0;
  std::vector<std::size_t> counts;  // equal-width bins over [0, max_risk]
};

RiskHistogram risk_histogram(std::span<const double> risks, std::size_t bins = 20);

}  // namespace dao
