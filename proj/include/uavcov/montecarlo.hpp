#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "uavcov/config.hpp"
#include "uavcov/rng.hpp"

namespace uavcov {

enum class LosMode {
  bernoulli, // independent LOS draw per UAV with p_los(r)
  grid,      // explicit building grid per trial and a ray test per UAV
};

std::string_view to_string(LosMode mode);
/// Throws std::invalid_argument for anything but "bernoulli" or "grid".
LosMode parse_los_mode(std::string_view text);

struct McConfig {
  std::uint64_t trials = 200000;
  std::uint64_t seed = 1;
  LosMode los_mode = LosMode::bernoulli;
  std::optional<double> conditional_r1;
  unsigned threads = 1; // 0: one per hardware thread
};

struct McEstimate {
  double p_cov_hat = 0.0;
  double ci95_halfwidth = 0.0;
  double p_los_serving_hat = 0.0; // among associated trials; NaN if none
  double p_assoc_hat = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  LosMode los_mode = LosMode::bernoulli;
  std::uint64_t covered = 0;
  std::uint64_t associated = 0;
  std::uint64_t serving_los = 0;
};

struct TrialOutcome {
  bool covered = false;
  bool associated = false;
  std::optional<bool> serving_los;
};

/// Normal-approximation 95% half-width, 1.96 * sqrt(p (1 - p) / n).
double ci95_halfwidth(double p, std::uint64_t n);

/// One downlink snapshot: Poisson UAVs in the cone window, LOS states,
/// unit-mean Gamma(m, 1/m) fading, strongest-mean-power association.
TrialOutcome run_trial(const ScenarioConfig& cfg, const McConfig& mc, Rng& rng);

/// Aggregates `mc.trials` trials, trial k drawing from substream(seed, k).
/// The result is identical for any thread count.
McEstimate estimate(const ScenarioConfig& cfg, const McConfig& mc);

/// Coverage given a serving UAV at mc.conditional_r1 of the given type, with
/// interferers sampled beyond the association exclusion bounds. Bernoulli
/// LOS only.
McEstimate estimate_conditional(const ScenarioConfig& cfg, const McConfig& mc, bool serving_los);

} // namespace uavcov
