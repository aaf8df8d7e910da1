#include "ramanpcr/fdist.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "ramanpcr/error.hpp"

namespace ramanpcr {

namespace {

double log_gamma(double x) {
  int sign = 0;
  return ::lgamma_r(x, &sign);  // lgamma() writes the global signgam
}

// Continued fraction for I_x(a, b) (modified Lentz), valid for
// x < (a + 1) / (a + b + 2).
double beta_fraction(double a, double b, double x) {
  constexpr double tiny = 1e-300;
  constexpr double eps = 1e-16;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < tiny) d = tiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= 100000; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < eps) return h;
  }
  throw Error(ErrorCode::NoConvergence, "incomplete beta continued fraction");
}

}  // namespace

BetaTail incomplete_beta(double a, double b, double x, double y) {
  if (!(a > 0.0) || !(b > 0.0)) throw Error(ErrorCode::InvalidParameter, "beta parameters must be > 0");
  if (std::isnan(x) || x < 0.0 || x > 1.0) throw Error(ErrorCode::InvalidParameter, "x must lie in [0, 1]");
  if (x == 0.0) return {0.0, 1.0};
  if (y == 0.0) return {1.0, 0.0};
  const double log_front =
      a * std::log(x) + b * std::log(y) - (log_gamma(a) + log_gamma(b) - log_gamma(a + b));
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    const double lower = front * beta_fraction(a, b, x) / a;
    return {lower, 1.0 - lower};
  }
  const double upper = front * beta_fraction(b, a, y) / b;
  return {1.0 - upper, upper};
}

double incomplete_beta(double a, double b, double x) { return incomplete_beta(a, b, x, 1.0 - x).lower; }

namespace {

BetaTail f_tails(double x, double d1, double d2) {
  if (!(d1 > 0.0) || !(d2 > 0.0)) throw Error(ErrorCode::InvalidParameter, "degrees of freedom must be > 0");
  if (std::isnan(x)) throw Error(ErrorCode::InvalidParameter, "F statistic is NaN");
  if (x <= 0.0) return {0.0, 1.0};
  if (std::isinf(x)) return {1.0, 0.0};
  const double denom = d1 * x + d2;
  return incomplete_beta(0.5 * d1, 0.5 * d2, d1 * x / denom, d2 / denom);
}

}  // namespace

double f_cdf(double x, double d1, double d2) { return f_tails(x, d1, d2).lower; }

double f_sf(double x, double d1, double d2) { return f_tails(x, d1, d2).upper; }

double f_quantile(double prob, double d1, double d2) {
  if (!(prob >= 0.0 && prob < 1.0)) throw Error(ErrorCode::InvalidParameter, "probability must lie in [0, 1)");
  if (prob == 0.0) return 0.0;
  double lo = 0.0;
  double hi = 1.0;
  while (f_cdf(hi, d1, d2) < prob) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e300) return std::numeric_limits<double>::infinity();
  }
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (f_cdf(mid, d1, d2) < prob ? lo : hi) = mid;
  }
  return hi;
}

double t_two_sided_p(double t, double df) {
  if (!(df > 0.0)) throw Error(ErrorCode::InvalidParameter, "degrees of freedom must be > 0");
  if (std::isnan(t)) throw Error(ErrorCode::InvalidParameter, "t statistic is NaN");
  if (std::isinf(t)) return 0.0;
  const double t2 = t * t;
  const double denom = df + t2;
  return incomplete_beta(0.5 * df, 0.5, df / denom, t2 / denom).lower;
}

}  // namespace ramanpcr
