#include "scenestat/stats/mediation.h"

#include <cmath>
#include <limits>
#include <vector>

#include "scenestat/error.h"
#include "scenestat/stats/descriptive.h"
#include "scenestat/stats/distributions.h"
#include "scenestat/stats/regression.h"

namespace scenestat::stats {

SobelResult sobel(double a, double se_a, double b, double se_b) {
  if (!(se_a > 0.0) || !(se_b > 0.0)) {
    throw DegenerateInputError("Sobel test needs positive standard errors");
  }
  if (a * b == 0.0) return {0.0, 1.0};
  const double z = a * b / std::sqrt(b * b * se_a * se_a + a * a * se_b * se_b);
  return {z, normal_two_sided_p(z)};
}

MediationReport mediation(std::span<const double> predictor, std::span<const double> mediator,
                          std::span<const double> outcome) {
  if (predictor.size() != mediator.size() || predictor.size() != outcome.size()) {
    throw DegenerateInputError("mediation inputs differ in length");
  }
  if (predictor.size() < 4) throw DegenerateInputError("mediation needs n >= 4");

  const auto x = standardize(predictor);
  const auto m = standardize(mediator);
  const auto y = standardize(outcome);

  const auto total = ols(y, {x}, {"predictor"});
  const auto a_path = ols(m, {x}, {"predictor"});
  const auto full = ols(y, {x, m}, {"predictor", "mediator"});

  MediationReport rep;
  rep.n = predictor.size();
  rep.c = total.coefficients[1];
  rep.se_c = total.std_errors[1];
  rep.p_c = total.p_values[1];
  rep.a = a_path.coefficients[1];
  rep.se_a = a_path.std_errors[1];
  rep.p_a = a_path.p_values[1];
  rep.c_prime = full.coefficients[1];
  rep.se_c_prime = full.std_errors[1];
  rep.p_c_prime = full.p_values[1];
  rep.b = full.coefficients[2];
  rep.se_b = full.std_errors[2];
  rep.p_b = full.p_values[2];
  rep.indirect = rep.a * rep.b;
  if (rep.se_a > 0.0 && rep.se_b > 0.0) {
    const auto s = sobel(rep.a, rep.se_a, rep.b, rep.se_b);
    rep.sobel_z = s.z;
    rep.sobel_p = s.p;
  } else if (rep.indirect != 0.0) {
    // An exact fit leaves a zero standard error; the indirect effect is then
    // known without sampling error.
    rep.sobel_z = std::copysign(std::numeric_limits<double>::infinity(), rep.indirect);
    rep.sobel_p = 0.0;
  }
  rep.adj_r_squared = full.adj_r_squared;
  rep.model_p = full.f_p_value;
  return rep;
}

double subjective_randomness(const JudgmentAggregate& agg, LogBase base) {
  if (agg.n_total == 0) {
    throw DataError("pattern " + std::to_string(agg.pattern) + " has no judgments");
  }
  if (agg.n_random > agg.n_total) throw DataError("n_random exceeds n_total");
  const double p = (static_cast<double>(agg.n_random) + 0.5) / (static_cast<double>(agg.n_total) + 1.0);
  return log_in(base, p);
}

}  // namespace scenestat::stats
