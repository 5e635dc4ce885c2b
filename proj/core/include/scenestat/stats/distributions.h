#pragma once

namespace scenestat::stats {

// Distribution functions used for every reported p value. Absolute accuracy is
// about 1e-12 or better over the ranges the analyses touch.

/// Regularized incomplete beta I_x(a, b), a, b > 0, x in [0, 1].
double incomplete_beta(double a, double b, double x);

double normal_cdf(double z);
/// P(|Z| >= |z|).
double normal_two_sided_p(double z);

/// CDF of Student's t with `df` > 0 degrees of freedom.
double student_t_cdf(double t, double df);
/// P(|T| >= |t|).
double student_t_two_sided_p(double t, double df);

/// Upper tail P(F >= f) of the F distribution with (df1, df2) degrees of freedom.
double f_upper_tail(double f, double df1, double df2);

}  // namespace scenestat::stats
