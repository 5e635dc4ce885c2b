#include <gtest/gtest.h>

#include <boost/math/distributions/students_t.hpp>
#include <cmath>

#include "scenestat/error.h"
#include "scenestat/stats/descriptive.h"

namespace scenestat::stats {
namespace {

const std::vector<double> kX = {2.1, 3.4, 1.9, 5.6, 4.2, 3.3, 6.1, 2.8, 4.9, 3.7};
const std::vector<double> kY = {1.2, 2.9, 2.2, 4.8, 3.1, 3.5, 5.2, 1.9, 4.1, 2.6};

TEST(Pearson, PerfectLine) {
  const std::vector<double> x = {1, 2, 3, 4, 5};
  std::vector<double> y;
  for (double v : x) y.push_back(2 * v + 1);
  const auto c = pearson(x, y);
  EXPECT_DOUBLE_EQ(c.r, 1.0);
  EXPECT_EQ(c.p, 0.0);
}

TEST(Pearson, Orthogonal) {
  const auto c = pearson(std::vector<double>{-1, 0, 1}, std::vector<double>{1, -2, 1});
  EXPECT_EQ(c.r, 0.0);
  EXPECT_NEAR(c.p, 1.0, 1e-12);
}

TEST(Pearson, TenPointDirectFormula) {
  long double sx = 0, sy = 0;
  for (std::size_t i = 0; i < kX.size(); ++i) {
    sx += kX[i];
    sy += kY[i];
  }
  const long double mx = sx / kX.size(), my = sy / kY.size();
  long double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < kX.size(); ++i) {
    sxy += (kX[i] - mx) * (kY[i] - my);
    sxx += (kX[i] - mx) * (kX[i] - mx);
    syy += (kY[i] - my) * (kY[i] - my);
  }
  const double r = static_cast<double>(sxy / std::sqrt(sxx * syy));
  const double t = r * std::sqrt(8.0 / (1.0 - r * r));
  const boost::math::students_t_distribution<double> dist(8.0);
  const double p = 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t)));

  const auto c = pearson(kX, kY);
  EXPECT_NEAR(c.r, r, 1e-12);
  EXPECT_NEAR(c.t, t, 1e-10);
  EXPECT_NEAR(c.p, p, 1e-12);
  EXPECT_EQ(c.n, 10u);
}

TEST(Pearson, SymmetryAndAffineInvariance) {
  const double r = pearson(kX, kY).r;
  EXPECT_NEAR(pearson(kY, kX).r, r, 1e-14);
  std::vector<double> scaled;
  for (double v : kX) scaled.push_back(3.5 * v - 11.0);
  EXPECT_NEAR(pearson(scaled, kY).r, r, 1e-12);
  EXPECT_LE(std::abs(r), 1.0);
}

TEST(Pearson, Degenerate) {
  EXPECT_THROW(pearson(std::vector<double>{1, 1, 1}, std::vector<double>{1, 2, 3}),
               DegenerateInputError);
  EXPECT_THROW(pearson(std::vector<double>{1, 2}, std::vector<double>{1, 2}), DegenerateInputError);
  EXPECT_THROW(pearson(std::vector<double>{1, 2, 3}, std::vector<double>{1, 2}), DegenerateInputError);
}

TEST(Standardize, Examples) {
  EXPECT_EQ(standardize(std::vector<double>{1, 2, 3}), (std::vector<double>{-1, 0, 1}));
  const auto z = standardize(kX);
  EXPECT_NEAR(mean(z), 0.0, 1e-14);
  EXPECT_NEAR(sample_sd(z), 1.0, 1e-14);
  const auto again = standardize(z);
  for (std::size_t i = 0; i < z.size(); ++i) EXPECT_NEAR(again[i], z[i], 1e-12);
  std::vector<double> flipped;
  for (double v : kX) flipped.push_back(-2.0 * v + 7.0);
  const auto zf = standardize(flipped);
  for (std::size_t i = 0; i < z.size(); ++i) EXPECT_NEAR(zf[i], -z[i], 1e-12);
  EXPECT_THROW(standardize(std::vector<double>{4, 4}), DegenerateInputError);
}

}  // namespace
}  // namespace scenestat::stats
