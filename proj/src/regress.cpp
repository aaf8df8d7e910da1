#include "ramanpcr/regress.hpp"

#include <Eigen/Eigenvalues>

namespace ramanpcr {

namespace {

constexpr double kMaxCondition = 1e12;

}  // namespace

PcrModel PcrModel::truncated(Index m) const {
  PcrModel out;
  out.pca = pca.truncated(m);
  out.coefficients = coefficients.leftCols(m);
  out.mean_conc = mean_conc;
  out.species = species;
  out.units = units;
  out.pipeline = pipeline;
  return out;
}

PcrModel pcr_fit(const PcaModel& pca, const ConcentrationSet& conc) {
  const Eigen::MatrixXd& scores = pca.scores;
  if (conc.samples() != scores.rows())
    throw Error(ErrorCode::ShapeMismatch, std::to_string(conc.samples()) + " concentration columns for " +
                                              std::to_string(scores.rows()) + " score rows");
  if (scores.cols() == 0) throw Error(ErrorCode::SingularScores, "model has no components");

  const Eigen::MatrixXd gram = scores.transpose() * scores;
  const Eigen::VectorXd eig = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(gram, Eigen::EigenvaluesOnly).eigenvalues();
  const double largest = eig.maxCoeff();
  const double smallest = eig.minCoeff();
  if (!(smallest > 0.0) || largest / smallest > kMaxCondition)
    throw Error(ErrorCode::SingularScores,
                "cond(T^T T) = " + (smallest > 0.0 ? format_number(largest / smallest) : std::string("inf")));

  PcrModel model;
  model.pca = pca;
  model.species = conc.species();
  model.units = conc.units();
  model.mean_conc = conc.matrix().rowwise().mean();
  const Eigen::MatrixXd centred = conc.matrix().colwise() - model.mean_conc;
  model.coefficients = scores.householderQr().solve(centred.transpose()).transpose();
  return model;
}

Eigen::MatrixXd pcr_predict(const PcrModel& model, const Eigen::MatrixXd& spectra) {
  const Eigen::MatrixXd scores = project(model.pca, spectra);
  return (model.coefficients * scores.transpose()).colwise() + model.mean_conc;
}

Eigen::MatrixXd pcr_predict(const PcrModel& model, const SpectraSet& set) {
  const Eigen::MatrixXd scores = project(model.pca, set);
  return (model.coefficients * scores.transpose()).colwise() + model.mean_conc;
}

ConcentrationSet predict_concentrations(const PcrModel& model, const SpectraSet& raw) {
  if (model.pca.axis.size() > 0) require_same_axis(model.pca.axis, raw.axis());
  const SpectraSet treated = apply_pipeline(raw, model.pipeline);
  return ConcentrationSet(pcr_predict(model, treated), model.species, model.units, raw.labels());
}

}  // namespace ramanpcr
