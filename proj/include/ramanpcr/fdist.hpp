#pragma once

namespace ramanpcr {

struct BetaTail {
  double lower;  // I_x(a, b)
  double upper;  // 1 - I_x(a, b), computed without cancellation
};

/// Regularized incomplete beta function. Pass y = 1 - x explicitly when it
/// is known more accurately than 1 - x.
BetaTail incomplete_beta(double a, double b, double x, double y);
double incomplete_beta(double a, double b, double x);

/// CDF of the F distribution with (d1, d2) degrees of freedom.
double f_cdf(double x, double d1, double d2);
/// 1 - f_cdf, accurate in the far tail.
double f_sf(double x, double d1, double d2);
/// Smallest x with f_cdf(x) >= prob, by bisection.
double f_quantile(double prob, double d1, double d2);

/// Two-sided p-value of Student's t with df degrees of freedom.
double t_two_sided_p(double t, double df);

}  // namespace ramanpcr
