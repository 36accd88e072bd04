#include "dao/adacp.hpp"

#include <algorithm>
#include <cmath>

#include "dao/errors.hpp"

namespace dao {

void AdaCPConfig::validate() const {
  if (!(delta > 0.0 && delta < 1.0)) throw ConfigError("delta must be in (0, 1)");
  if (!(beta > 0.0 && beta <= 1.0)) throw ConfigError("beta must be in (0, 1]");
  if (ed_override && !(*ed_override >= 0.0)) throw ConfigError("ED threshold override must be non-negative");
  if (eae_override && !(*eae_override >= 0.0)) throw ConfigError("EAE threshold override must be non-negative");
}

std::size_t conformal_rank(std::size_t n, double delta) {
  const double x = static_cast<double>(n + 1) * (1.0 - delta);
  // (n+1)(1-delta) is often an integer in exact arithmetic; absorb the
  // rounding error of the product before taking the ceiling.
  const double rank = std::ceil(x - 1e-9 * std::max(1.0, x));
  return static_cast<std::size_t>(std::max(rank, 1.0));
}

RiskThreshold calibrate(std::span<const double> risks, double delta) {
  if (risks.empty()) throw EmptyCalibrationSet();
  if (!(delta > 0.0 && delta < 1.0)) throw ConfigError("delta must be in (0, 1)");
  const std::size_t rank = conformal_rank(risks.size(), delta);
  if (rank > risks.size()) return {};
  std::vector<double> sorted(risks.begin(), risks.end());
  std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(rank - 1), sorted.end());
  return {sorted[rank - 1], 0};
}

std::string scoring_prompt(std::string_view input, std::string_view retrieved) {
  std::string out(input);
  if (!retrieved.empty()) {
    out += "\n\nReference information:\n";
    out += retrieved;
  }
  return out;
}

double risk_score(ScoringBackend& scorer, std::string_view input, std::string_view retrieved,
                  std::string_view answer) {
  if (answer.empty()) throw ConfigError("cannot score an empty answer");
  return scorer.negative_log_likelihood(scoring_prompt(input, retrieved), answer);
}

RiskHistogram risk_histogram(std::span<const double> risks, std::size_t bins) {
  RiskHistogram h;
  h.counts.assign(std::max<std::size_t>(bins, 1), 0);
  for (double r : risks) h.max_risk = std::max(h.max_risk, r);
  for (double r : risks) {
    std::size_t b = 0;
    if (h.max_risk > 0.0) {
      b = static_cast<std::size_t>(r / h.max_risk * static_cast<double>(h.counts.size()));
      b = std::min(b, h.counts.size() - 1);
    }
    ++h.counts[b];
  }
  return h;
}

}  // namespace dao
