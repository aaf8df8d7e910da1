#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ramanpcr/decompose.hpp"
#include "ramanpcr/error.hpp"
#include "ramanpcr/pipeline.hpp"
#include "ramanpcr/spectra.hpp"

namespace ramanpcr {

/// Principal component regression on top of a PcaModel. Concentrations are
/// centred for the fit and the mean is added back on prediction.
struct PcrModel {
  PcaModel pca;
  Eigen::MatrixXd coefficients;  // q x k, column a pairs with pca.loadings.col(a)
  Eigen::VectorXd mean_conc;     // q
  std::vector<std::string> species;
  std::vector<std::string> units;
  /// The pre-treatment that produced the training spectra.
  Pipeline pipeline;

  Index components() const noexcept { return coefficients.cols(); }
  Index species_count() const noexcept { return coefficients.rows(); }

  /// Leading m components and their coefficients.
  PcrModel truncated(Index m) const;
};

/// Least-squares solution of C_centred ~ B * T^T via a QR factorization of
/// the scores. Throws SingularScores when cond(T^T T) exceeds 1e12.
PcrModel pcr_fit(const PcaModel& pca, const ConcentrationSet& conc);

/// C_est = B * scores(new)^T + mean_conc; q x r. `set` must already be
/// pre-treated with the model's pipeline.
Eigen::MatrixXd pcr_predict(const PcrModel& model, const SpectraSet& set);
Eigen::MatrixXd pcr_predict(const PcrModel& model, const Eigen::MatrixXd& spectra);

/// Applies the model's pipeline to raw spectra, then predicts. Columns are
/// labelled with the spectrum labels.
ConcentrationSet predict_concentrations(const PcrModel& model, const SpectraSet& raw);

/// Sum of squared prediction errors over every species and sample.
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar press(const Eigen::MatrixBase<DerivedA>& estimated,
                                const Eigen::MatrixBase<DerivedB>& actual) {
  if (estimated.rows() != actual.rows() || estimated.cols() != actual.cols())
    throw Error(ErrorCode::ShapeMismatch, "press needs equal shapes, got " + std::to_string(estimated.rows()) +
                                              "x" + std::to_string(estimated.cols()) + " and " +
                                              std::to_string(actual.rows()) + "x" + std::to_string(actual.cols()));
  return (estimated - actual).squaredNorm();
}

}  // namespace ramanpcr
