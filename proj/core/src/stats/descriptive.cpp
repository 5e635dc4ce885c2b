#include "scenestat/stats/descriptive.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "scenestat/error.h"
#include "scenestat/stats/distributions.h"

namespace scenestat::stats {

double mean(std::span<const double> v) {
  if (v.empty()) throw DegenerateInputError("mean of an empty sample");
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double sample_sd(std::span<const double> v) {
  if (v.size() < 2) throw DegenerateInputError("standard deviation needs n >= 2");
  const double m = mean(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

std::vector<double> standardize(std::span<const double> v) {
  const double sd = sample_sd(v);
  if (!(sd > 0.0)) throw DegenerateInputError("cannot standardize a zero-variance sample");
  const double m = mean(v);
  std::vector<double> out(v.size());
  std::transform(v.begin(), v.end(), out.begin(), [&](double x) { return (x - m) / sd; });
  return out;
}

Correlation pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw DegenerateInputError("correlation inputs differ in length (" + std::to_string(x.size()) +
                               " vs " + std::to_string(y.size()) + ")");
  }
  if (x.size() < 3) throw DegenerateInputError("correlation needs n >= 3");
  const double mx = mean(x), my = mean(y);
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (!(sxx > 0.0) || !(syy > 0.0)) throw DegenerateInputError("correlation of a constant sample");

  Correlation out;
  out.n = x.size();
  out.r = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
  const double df = static_cast<double>(out.n - 2);
  if (std::fabs(out.r) == 1.0) {
    out.t = std::copysign(std::numeric_limits<double>::infinity(), out.r);
    out.p = 0.0;
  } else {
    out.t = out.r * std::sqrt(df / (1.0 - out.r * out.r));
    out.p = student_t_two_sided_p(out.t, df);
  }
  return out;
}

}  // namespace scenestat::stats
