#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace scenestat::stats {

double mean(std::span<const double> v);
/// Sample standard deviation (n − 1 denominator).
double sample_sd(std::span<const double> v);

/// z-scores with mean 0 and sample sd 1. Throws DegenerateInputError for
/// n < 2 or zero variance.
std::vector<double> standardize(std::span<const double> v);

struct Correlation {
  double r = 0.0;
  double t = 0.0;
  double p = 1.0;  // two-sided, Student t with n − 2 df
  std::size_t n = 0;
};

/// Sample Pearson correlation. Requires equal lengths, n >= 3 and non-zero
/// variance in both vectors (DegenerateInputError otherwise).
Correlation pearson(std::span<const double> x, std::span<const double> y);

}  // namespace scenestat::stats
