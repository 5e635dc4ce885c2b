#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

#include "scenestat/log_base.h"

namespace scenestat::stats {

struct SobelResult {
  double z = 0.0;
  double p = 1.0;
};

/// Classic Sobel test of the indirect effect a·b:
/// z = a·b / √(b²·se_a² + a²·se_b²), two-sided normal p. z = 0 when a·b = 0.
SobelResult sobel(double a, double se_a, double b, double se_b);

/// Standardized three-variable mediation. All paths are slopes of OLS fits on
/// z-scored data: c (outcome ~ predictor), a (mediator ~ predictor), and
/// c′, b (outcome ~ predictor + mediator).
struct MediationReport {
  double a = 0.0, se_a = 0.0, p_a = 1.0;
  double b = 0.0, se_b = 0.0, p_b = 1.0;
  double c = 0.0, se_c = 0.0, p_c = 1.0;
  double c_prime = 0.0, se_c_prime = 0.0, p_c_prime = 1.0;
  double indirect = 0.0;  // a·b
  double sobel_z = 0.0;
  double sobel_p = 1.0;
  double adj_r_squared = 0.0;  // outcome ~ predictor + mediator
  double model_p = 1.0;        // overall F test of that model
  std::size_t n = 0;

  friend bool operator==(const MediationReport&, const MediationReport&) = default;
};

MediationReport mediation(std::span<const double> predictor, std::span<const double> mediator,
                          std::span<const double> outcome);

struct JudgmentAggregate {
  std::uint32_t pattern = 0;
  std::uint64_t n_random = 0;
  std::uint64_t n_total = 0;
};

/// log p̃ with p̃ = (n_random + 0.5) / (n_total + 1), the share of "random"
/// judgments with add-half smoothing so unanimous patterns stay finite.
/// Throws DataError when n_total = 0 or n_random > n_total.
double subjective_randomness(const JudgmentAggregate& agg, LogBase base = LogBase::kBits);

}  // namespace scenestat::stats
