#include "ramanpcr/preprocess.hpp"

#include <algorithm>
#include <vector>

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

namespace ramanpcr {

namespace {

void check_savgol(int window, int polyorder, int deriv) {
  if (window < 5 || window % 2 == 0)
    throw Error(ErrorCode::InvalidParameter, "window must be odd and >= 5, got " + std::to_string(window));
  if (polyorder < 0 || polyorder >= window)
    throw Error(ErrorCode::BadOrder, "polyorder must satisfy 0 <= polyorder < window");
  if (deriv < 0 || deriv > polyorder)
    throw Error(ErrorCode::BadOrder, "deriv must satisfy 0 <= deriv <= polyorder");
}

double median_of(std::vector<double>& values) {
  const auto mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
  const double upper = values[mid];
  if (values.size() % 2 == 1) return upper;
  const double lower = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

}  // namespace

Eigen::VectorXd savgol_coefficients(int window, int polyorder, int deriv, int position) {
  check_savgol(window, polyorder, deriv);
  const int half = window / 2;
  if (position < -half || position > half)
    throw Error(ErrorCode::InvalidParameter, "evaluation position outside the window");

  // Fit in the scaled coordinate u = offset / half to keep the Vandermonde
  // matrix well conditioned for wide windows.
  const double scale = static_cast<double>(half);
  Eigen::MatrixXd vandermonde(window, polyorder + 1);
  for (int r = 0; r < window; ++r) {
    const double u = static_cast<double>(r - half) / scale;
    double power = 1.0;
    for (int c = 0; c <= polyorder; ++c) {
      vandermonde(r, c) = power;
      power *= u;
    }
  }
  // d^deriv/dx^deriv of u^c at the evaluation point, with x = half * u.
  const double u0 = static_cast<double>(position) / scale;
  Eigen::VectorXd basis = Eigen::VectorXd::Zero(polyorder + 1);
  for (int c = deriv; c <= polyorder; ++c) {
    double falling = 1.0;
    for (int f = 0; f < deriv; ++f) falling *= static_cast<double>(c - f);
    basis[c] = falling * std::pow(u0, c - deriv) / std::pow(scale, deriv);
  }
  const Eigen::MatrixXd pinv = vandermonde.completeOrthogonalDecomposition().pseudoInverse();
  return pinv.transpose() * basis;
}

Eigen::VectorXd savitzky_golay(const Eigen::Ref<const Eigen::VectorXd>& x, int window, int polyorder,
                               int deriv, double spacing) {
  check_savgol(window, polyorder, deriv);
  const Index n = x.size();
  if (window > n)
    throw Error(ErrorCode::WindowTooLarge,
                "window " + std::to_string(window) + " exceeds " + std::to_string(n) + " channels");
  if (deriv > 0 && !(spacing > 0.0)) throw Error(ErrorCode::InvalidParameter, "spacing must be > 0");

  const int half = window / 2;
  Eigen::VectorXd out(n);
  const Eigen::VectorXd centre = savgol_coefficients(window, polyorder, deriv, 0);
  for (Index k = half; k < n - half; ++k) out[k] = centre.dot(x.segment(k - half, window));
  for (int k = 0; k < half; ++k) {
    const Eigen::VectorXd head = savgol_coefficients(window, polyorder, deriv, k - half);
    out[k] = head.dot(x.head(window));
    const Eigen::VectorXd tail = savgol_coefficients(window, polyorder, deriv, half - k);
    out[n - 1 - k] = tail.dot(x.tail(window));
  }
  if (deriv > 0) out /= std::pow(spacing, deriv);
  return out;
}

BaselineEstimate baseline_als(const Eigen::Ref<const Eigen::VectorXd>& y, double lambda, double p,
                              int iterations) {
  if (!(lambda > 0.0)) throw Error(ErrorCode::InvalidParameter, "lambda must be > 0");
  if (!(p > 0.0 && p < 1.0)) throw Error(ErrorCode::InvalidParameter, "asymmetry p must lie in (0, 1)");
  if (iterations < 1) throw Error(ErrorCode::InvalidParameter, "iterations must be >= 1");
  const Index n = y.size();
  if (n < 8) throw Error(ErrorCode::InvalidParameter, "baseline needs at least 8 channels");

  using Sparse = Eigen::SparseMatrix<double>;
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(3 * (n - 2)));
  for (Index r = 0; r < n - 2; ++r) {
    triplets.emplace_back(r, r, 1.0);
    triplets.emplace_back(r, r + 1, -2.0);
    triplets.emplace_back(r, r + 2, 1.0);
  }
  Sparse second_diff(n - 2, n);
  second_diff.setFromTriplets(triplets.begin(), triplets.end());
  const Sparse penalty = lambda * Sparse(second_diff.transpose() * second_diff);

  Eigen::VectorXd weights = Eigen::VectorXd::Ones(n);
  Eigen::VectorXd z = Eigen::VectorXd::Zero(n);
  Eigen::SimplicialLDLT<Sparse> solver;
  Sparse system = penalty;
  for (Index k = 0; k < n; ++k) system.coeffRef(k, k) += 1.0;
  solver.analyzePattern(system);
  for (int it = 0; it < iterations; ++it) {
    system = penalty;
    for (Index k = 0; k < n; ++k) system.coeffRef(k, k) += weights[k];
    solver.factorize(system);
    if (solver.info() != Eigen::Success) throw Error(ErrorCode::StepFailure, "baseline system is singular");
    z = solver.solve(weights.cwiseProduct(y));
    for (Index k = 0; k < n; ++k) weights[k] = y[k] > z[k] ? p : 1.0 - p;
  }
  return {y - z, z};
}

Eigen::VectorXd despike(const Eigen::Ref<const Eigen::VectorXd>& x, int window, double threshold) {
  if (window < 3 || window % 2 == 0)
    throw Error(ErrorCode::InvalidParameter, "despike window must be odd and >= 3");
  if (!(threshold > 0.0)) throw Error(ErrorCode::InvalidParameter, "despike threshold must be > 0");
  const Index n = x.size();
  const Index half = window / 2;
  Eigen::VectorXd out = x;
  std::vector<double> local;
  std::vector<double> spread;
  for (Index k = 0; k < n; ++k) {
    const Index lo = std::max<Index>(0, k - half);
    const Index hi = std::min<Index>(n - 1, k + half);
    local.assign(x.data() + lo, x.data() + hi + 1);
    const double med = median_of(local);
    spread.clear();
    for (Index m = lo; m <= hi; ++m) spread.push_back(std::abs(x[m] - med));
    const double mad = median_of(spread);
    if (std::abs(x[k] - med) > threshold * mad) out[k] = med;
  }
  return out;
}

}  // namespace ramanpcr
