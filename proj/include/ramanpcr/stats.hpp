#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Dense>

namespace ramanpcr {

template <typename Derived>
typename Derived::Scalar sample_sd(const Eigen::DenseBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  const auto n = x.size();
  if (n < 2) return Scalar(0);
  const Scalar mu = x.mean();
  return std::sqrt((x.derived().array() - mu).square().sum() / Scalar(n - 1));
}

/// Linear interpolation between order statistics ("type 7"): position
/// h = (n - 1) * pct / 100 in the sorted sample.
template <typename Scalar>
Scalar percentile_sorted(const std::vector<Scalar>& sorted, Scalar pct) {
  const auto n = sorted.size();
  if (n == 1) return sorted.front();
  const Scalar h = Scalar(n - 1) * pct / Scalar(100);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= n) return sorted.back();
  const Scalar frac = h - Scalar(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

template <typename Derived>
typename Derived::Scalar percentile(const Eigen::DenseBase<Derived>& x, typename Derived::Scalar pct) {
  using Scalar = typename Derived::Scalar;
  std::vector<Scalar> sorted(static_cast<std::size_t>(x.size()));
  for (Eigen::Index k = 0; k < x.size(); ++k) sorted[static_cast<std::size_t>(k)] = x.derived()(k);
  std::sort(sorted.begin(), sorted.end());
  return percentile_sorted(sorted, pct);
}

}  // namespace ramanpcr
