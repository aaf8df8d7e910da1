#pragma once

#include <vector>

#include <Eigen/Dense>

#include "ramanpcr/error.hpp"
#include "ramanpcr/spectra.hpp"

namespace ramanpcr {

/// Principal components of a mean-centred spectra matrix:
/// X - 1 * mean = scores * loadings^T + E.
struct PcaModel {
  Eigen::VectorXd axis;            // empty when fitted on a bare matrix
  Eigen::VectorXd mean_spectrum;   // j
  Eigen::MatrixXd loadings;        // j x k, orthonormal columns
  Eigen::MatrixXd scores;          // i x k, orthogonal columns
  Eigen::VectorXd explained_variance;
  /// residual_path[m] = ||E||_F after m components; residual_path[0] = ||X_c||_F.
  Eigen::VectorXd residual_path;
  double residual_fro = 0.0;
  bool rank_deficient = false;
  /// Components whose iteration hit max_iter (only populated when
  /// NipalsOptions::accept_unconverged is set).
  std::vector<Index> unconverged;

  Index components() const noexcept { return loadings.cols(); }

  /// The leading m components, exactly as a fit with k = m would give them.
  PcaModel truncated(Index m) const;
};

struct NipalsOptions {
  double tol = 1e-10;
  int max_iter = 500;
  /// Keep the last iterate of a non-converged component instead of throwing.
  bool accept_unconverged = false;
};

/// Thrown when a component does not converge; carries the components that did.
class NoConvergenceError : public Error {
 public:
  NoConvergenceError(Index component, PcaModel partial);
  Index component() const noexcept { return component_; }
  const PcaModel& partial() const noexcept { return partial_; }

 private:
  Index component_;
  PcaModel partial_;
};

/// NIPALS with deflation. Starts each component from the residual column of
/// largest variance, iterates until the relative change of the score vector
/// drops below tol, then fixes the sign so the largest-magnitude loading entry
/// is positive. If the residual vanishes (below 1e-12 of the centred norm)
/// before k components are found, returns the shorter model flagged
/// rank_deficient.
PcaModel nipals_fit(const Eigen::MatrixXd& x, Index k, const NipalsOptions& options = {});
PcaModel nipals_fit(const SpectraSet& set, Index k, const NipalsOptions& options = {});

/// Scores of new spectra: (X_new - mean) * loadings.
Eigen::MatrixXd project(const PcaModel& model, const Eigen::MatrixXd& x);
/// Same, after checking the axis matches the training axis.
Eigen::MatrixXd project(const PcaModel& model, const SpectraSet& set);

}  // namespace ramanpcr
