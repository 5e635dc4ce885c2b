#include "scenestat/stats/regression.h"

#include <Eigen/Dense>
#include <cmath>
#include <limits>

#include "scenestat/error.h"
#include "scenestat/stats/distributions.h"

namespace scenestat::stats {

namespace {

// A column whose component orthogonal to the earlier columns is this small,
// relative to its own norm, is treated as linearly dependent.
constexpr double kRankTolerance = 1e-10;

}  // namespace

RegressionFit ols(std::span<const double> y, const std::vector<std::vector<double>>& predictors,
                  const std::vector<std::string>& names) {
  const std::size_t n = y.size();
  const std::size_t p = predictors.size() + 1;
  if (predictors.empty()) throw DegenerateInputError("regression needs at least one predictor");
  if (n <= p) {
    throw DegenerateInputError("regression with " + std::to_string(p) + " coefficients needs n > " +
                               std::to_string(p) + ", got " + std::to_string(n));
  }

  RegressionFit fit;
  fit.n = n;
  fit.df = n - p;
  fit.names.push_back("intercept");
  for (std::size_t j = 0; j < predictors.size(); ++j) {
    fit.names.push_back(j < names.size() ? names[j] : "x" + std::to_string(j + 1));
  }

  Eigen::MatrixXd x(n, p);
  Eigen::VectorXd yv(n);
  for (std::size_t i = 0; i < n; ++i) {
    x(i, 0) = 1.0;
    yv(i) = y[i];
  }
  for (std::size_t j = 0; j < predictors.size(); ++j) {
    if (predictors[j].size() != n) {
      throw DegenerateInputError("predictor '" + fit.names[j + 1] + "' has " +
                                 std::to_string(predictors[j].size()) + " values, expected " +
                                 std::to_string(n));
    }
    for (std::size_t i = 0; i < n; ++i) x(i, j + 1) = predictors[j][i];
  }

  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(x);
  const Eigen::MatrixXd r = qr.matrixQR().topRows(p).triangularView<Eigen::Upper>();
  for (std::size_t j = 0; j < p; ++j) {
    const double column_norm = x.col(j).norm();
    if (column_norm == 0.0 || std::fabs(r(j, j)) <= kRankTolerance * column_norm) {
      throw CollinearityError(j, fit.names[j]);
    }
  }

  const Eigen::VectorXd beta = qr.solve(yv);
  const Eigen::VectorXd residual = yv - x * beta;
  const double ssr = residual.squaredNorm();
  const double y_mean = yv.mean();
  const double sst = (yv.array() - y_mean).square().sum();
  if (!(sst > 0.0)) throw DegenerateInputError("regression response has zero variance");

  fit.residual_variance = ssr / static_cast<double>(fit.df);
  const Eigen::MatrixXd r_inv =
      r.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(p, p));
  const Eigen::MatrixXd xtx_inv = r_inv * r_inv.transpose();

  for (std::size_t j = 0; j < p; ++j) {
    const double coef = beta(j);
    const double se = std::sqrt(fit.residual_variance * xtx_inv(j, j));
    double t = 0.0, pv = 1.0;
    if (se > 0.0) {
      t = coef / se;
      pv = student_t_two_sided_p(t, static_cast<double>(fit.df));
    } else if (coef != 0.0) {
      t = std::copysign(std::numeric_limits<double>::infinity(), coef);
      pv = 0.0;
    }
    fit.coefficients.push_back(coef);
    fit.std_errors.push_back(se);
    fit.t_stats.push_back(t);
    fit.p_values.push_back(pv);
  }

  fit.r_squared = 1.0 - ssr / sst;
  const double k = static_cast<double>(p - 1);
  fit.adj_r_squared = 1.0 - (1.0 - fit.r_squared) * static_cast<double>(n - 1) /
                                static_cast<double>(fit.df);
  if (ssr > 0.0) {
    fit.f_stat = (fit.r_squared / k) / ((1.0 - fit.r_squared) / static_cast<double>(fit.df));
    fit.f_p_value = f_upper_tail(fit.f_stat, k, static_cast<double>(fit.df));
  } else {
    fit.f_stat = std::numeric_limits<double>::infinity();
    fit.f_p_value = 0.0;
  }
  return fit;
}

}  // namespace scenestat::stats
