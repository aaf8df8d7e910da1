#pragma once

#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ramanpcr/error.hpp"
#include "ramanpcr/stats.hpp"

// Per-spectrum pre-treatment kernels. Each takes one intensity vector (and
// the wavenumber axis where the operation needs it) and returns a new vector
// of the same length.

namespace ramanpcr {

using Index = Eigen::Index;

template <typename Derived>
using PlainVector = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1>;

/// Standard normal variate: (x - mean) / sample sd.
template <typename Derived>
PlainVector<Derived> snv(const Eigen::MatrixBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  if (x.size() < 2) throw Error(ErrorCode::ZeroVariance, "spectrum shorter than 2 channels");
  const Scalar sd = sample_sd(x);
  if (!(sd > Scalar(0))) throw Error(ErrorCode::ZeroVariance, "constant spectrum");
  return ((x.array() - x.mean()) / sd).matrix();
}

/// Robust normal variate: centre on the given percentile and scale by the
/// sample sd of the values at or below it.
template <typename Derived>
PlainVector<Derived> rnv(const Eigen::MatrixBase<Derived>& x, typename Derived::Scalar pct) {
  using Scalar = typename Derived::Scalar;
  if (!(pct > Scalar(0) && pct <= Scalar(100)))
    throw Error(ErrorCode::InvalidParameter, "rnv percentile must lie in (0, 100]");
  const Scalar centre = percentile(x, pct);
  std::vector<Scalar> lower;
  for (Eigen::Index k = 0; k < x.size(); ++k)
    if (x(k) <= centre) lower.push_back(x(k));
  if (lower.size() < 2)
    throw Error(ErrorCode::DegenerateSubset, "fewer than 2 values at or below the percentile");
  const Eigen::Map<const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>> subset(
      lower.data(), static_cast<Eigen::Index>(lower.size()));
  const Scalar sd = sample_sd(subset);
  if (!(sd > Scalar(0))) throw Error(ErrorCode::DegenerateSubset, "zero spread below the percentile");
  return ((x.array() - centre) / sd).matrix();
}

/// Throws NonuniformAxis unless every step is within 0.1% of the mean step.
/// Returns the mean step.
template <typename Derived>
typename Derived::Scalar uniform_spacing(const Eigen::MatrixBase<Derived>& axis) {
  using Scalar = typename Derived::Scalar;
  const auto n = axis.size();
  if (n < 2) throw Error(ErrorCode::NonuniformAxis, "axis shorter than 2 channels");
  const Scalar step = (axis(n - 1) - axis(0)) / Scalar(n - 1);
  for (Eigen::Index k = 1; k < n; ++k) {
    const Scalar d = axis(k) - axis(k - 1);
    if (std::abs(d - step) > Scalar(1e-3) * std::abs(step))
      throw Error(ErrorCode::NonuniformAxis,
                  "step at channel " + std::to_string(k) + " deviates more than 0.1% from the mean step");
  }
  return step;
}

/// Finite-difference derivative along the wavenumber axis: central
/// differences inside, one-sided at the two ends.
template <typename DerivedX, typename DerivedAxis>
PlainVector<DerivedX> derivative(const Eigen::MatrixBase<DerivedX>& x,
                                 const Eigen::MatrixBase<DerivedAxis>& axis, int order) {
  using Scalar = typename DerivedX::Scalar;
  if (order != 1 && order != 2) throw Error(ErrorCode::BadOrder, "derivative order must be 1 or 2");
  if (x.size() != axis.size()) throw Error(ErrorCode::ShapeMismatch, "spectrum and axis lengths differ");
  const auto n = x.size();
  if (n < 3) throw Error(ErrorCode::InvalidParameter, "derivative needs at least 3 channels");
  const Scalar h = uniform_spacing(axis);
  PlainVector<DerivedX> out(n);
  if (order == 1) {
    out(0) = (x(1) - x(0)) / h;
    for (Eigen::Index k = 1; k + 1 < n; ++k) out(k) = (x(k + 1) - x(k - 1)) / (Scalar(2) * h);
    out(n - 1) = (x(n - 1) - x(n - 2)) / h;
  } else {
    const Scalar h2 = h * h;
    out(0) = (x(0) - Scalar(2) * x(1) + x(2)) / h2;
    for (Eigen::Index k = 1; k + 1 < n; ++k) out(k) = (x(k + 1) - Scalar(2) * x(k) + x(k - 1)) / h2;
    out(n - 1) = (x(n - 1) - Scalar(2) * x(n - 2) + x(n - 3)) / h2;
  }
  return out;
}

/// Divides the spectrum by its maximum within [reference - half_width,
/// reference + half_width].
template <typename DerivedX, typename DerivedAxis>
PlainVector<DerivedX> peak_normalize(const Eigen::MatrixBase<DerivedX>& x,
                                     const Eigen::MatrixBase<DerivedAxis>& axis,
                                     typename DerivedX::Scalar reference,
                                     typename DerivedX::Scalar half_width) {
  using Scalar = typename DerivedX::Scalar;
  if (!(half_width >= Scalar(0))) throw Error(ErrorCode::InvalidParameter, "half width must be >= 0");
  if (x.size() != axis.size() || x.size() == 0)
    throw Error(ErrorCode::ShapeMismatch, "spectrum and axis lengths differ");
  const Scalar lo = reference - half_width;
  const Scalar hi = reference + half_width;
  if (lo < axis(0) || hi > axis(axis.size() - 1))
    throw Error(ErrorCode::WindowOutsideAxis, "reference window lies outside the axis");
  bool any = false;
  Scalar peak = Scalar(0);
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    if (axis(k) < lo || axis(k) > hi) continue;
    peak = any ? std::max(peak, x(k)) : x(k);
    any = true;
  }
  if (!any) throw Error(ErrorCode::WindowOutsideAxis, "reference window contains no channel");
  if (!(peak > Scalar(0))) throw Error(ErrorCode::NonpositivePeak, "reference peak maximum <= 0");
  return (x / peak).eval();
}

/// Savitzky-Golay weights that evaluate the `deriv`-th derivative (per
/// sample) of the least-squares polynomial fitted over `window` samples, at
/// offset `position` from the window centre. Apply as dot(weights, samples).
Eigen::VectorXd savgol_coefficients(int window, int polyorder, int deriv, int position = 0);

/// Savitzky-Golay smoothing/differentiation. Edge samples use the first and
/// last full-window fits evaluated off-centre. For deriv > 0 the result is
/// divided by spacing^deriv.
Eigen::VectorXd savitzky_golay(const Eigen::Ref<const Eigen::VectorXd>& x, int window, int polyorder,
                               int deriv = 0, double spacing = 1.0);

struct BaselineEstimate {
  Eigen::VectorXd corrected;
  Eigen::VectorXd baseline;
};

/// Asymmetric least squares baseline: minimises
/// sum w_k (y_k - z_k)^2 + lambda * sum (second difference of z)^2 with
/// weights p above the baseline and 1 - p below, re-weighted `iterations` times.
BaselineEstimate baseline_als(const Eigen::Ref<const Eigen::VectorXd>& y, double lambda, double p,
                              int iterations);

/// Running-median spike filter. Points deviating from the local median by
/// more than threshold * local MAD are replaced by the median; every other
/// point is copied unchanged.
Eigen::VectorXd despike(const Eigen::Ref<const Eigen::VectorXd>& x, int window, double threshold);

}  // namespace ramanpcr
