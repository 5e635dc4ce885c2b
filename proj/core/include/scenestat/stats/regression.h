#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace scenestat::stats {

/// Least-squares fit with intercept. Index 0 of every per-coefficient vector
/// is the intercept; index j > 0 is predictor j − 1.
struct RegressionFit {
  std::vector<std::string> names;
  std::vector<double> coefficients;
  std::vector<double> std_errors;
  std::vector<double> t_stats;
  std::vector<double> p_values;
  double r_squared = 0.0;
  double adj_r_squared = 0.0;
  double f_stat = 0.0;
  double f_p_value = 1.0;
  double residual_variance = 0.0;
  std::size_t n = 0;
  std::size_t df = 0;  // n − (#predictors + 1)
};

/// Solves through a Householder QR of the design matrix. Standard errors come
/// from σ̂²(XᵀX)⁻¹ = σ̂² R⁻¹R⁻ᵀ.
/// Throws CollinearityError naming the first column that is (numerically) a
/// linear combination of the columns before it, DegenerateInputError when
/// n <= #predictors + 1 or the response is constant.
RegressionFit ols(std::span<const double> y, const std::vector<std::vector<double>>& predictors,
                  const std::vector<std::string>& names = {});

}  // namespace scenestat::stats
