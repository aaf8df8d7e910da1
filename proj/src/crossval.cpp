#include "ramanpcr/crossval.hpp"

#include <limits>

#include "ramanpcr/parallel.hpp"
#include "ramanpcr/regress.hpp"

namespace ramanpcr {

namespace {

struct FoldResult {
  Eigen::RowVectorXd press;
  std::vector<bool> negative;
  std::vector<std::string> notes;
};

FoldResult run_fold(const SpectraSet& treated, const ConcentrationSet& conc, Index held_out,
                    const NipalsOptions& nipals) {
  const Index i = treated.rows();
  const Index pcs = i - 2;
  FoldResult result{Eigen::RowVectorXd::Constant(pcs, std::numeric_limits<double>::quiet_NaN()),
                    std::vector<bool>(static_cast<std::size_t>(pcs), false),
                    {}};
  const std::string& label = treated.labels()[held_out];

  std::vector<Index> train;
  for (Index r = 0; r < i; ++r)
    if (r != held_out) train.push_back(r);
  const SpectraSet train_set = treated.select_rows(train);
  const ConcentrationSet train_conc = conc.select_columns(train);
  const Eigen::MatrixXd held_spectrum = treated.matrix().row(held_out);
  const Eigen::VectorXd held_conc = conc.matrix().col(held_out);

  const PcaModel pca = nipals_fit(train_set, pcs, nipals);
  for (const Index a : pca.unconverged)
    result.notes.push_back("fold " + label + ": component " + std::to_string(a + 1) + " stopped at max_iter");
  if (pca.components() < pcs)
    result.notes.push_back("fold " + label + ": rank deficient after " + std::to_string(pca.components()) +
                           " components; pc_" + std::to_string(pca.components() + 1) + "..pc_" +
                           std::to_string(pcs) + " set to NaN");

  for (Index m = 1; m <= pca.components(); ++m) {
    PcrModel model;
    try {
      model = pcr_fit(pca.truncated(m), train_conc);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::SingularScores) throw;
      result.notes.push_back("fold " + label + ": singular scores at " + std::to_string(m) + " components (" +
                             e.detail() + "); pc_" + std::to_string(m) + "..pc_" + std::to_string(pcs) +
                             " set to NaN");
      break;
    }
    const Eigen::MatrixXd estimate = pcr_predict(model, held_spectrum);
    result.press[m - 1] = press(estimate.col(0), held_conc);
    result.negative[static_cast<std::size_t>(m - 1)] = (estimate.array() < 0.0).any();
  }
  return result;
}

}  // namespace

PressMatrix loo_press_matrix(const SpectraSet& set, const ConcentrationSet& conc, const Pipeline& pipeline,
                             const CrossvalOptions& options) {
  require_spectra(set, 4);
  const ConcentrationSet aligned = align_to_labels(conc, set.labels());

  // Every implemented step is spectrum-local, so treating the whole set once
  // is identical to treating each fold's training subset and held-out
  // spectrum separately.
  SpectraSet treated;
  try {
    treated = apply_pipeline(set, pipeline);
  } catch (const Error& e) {
    throw Error(ErrorCode::FoldPreprocessFailure, "pipeline=" + pipeline.name() + " " + std::string(e.what()));
  }

  const Index i = set.rows();
  std::vector<FoldResult> folds(static_cast<std::size_t>(i));
  parallel_for(folds.size(), options.threads, [&](std::size_t n) {
    folds[n] = run_fold(treated, aligned, static_cast<Index>(n), options.nipals);
  });

  PressMatrix out;
  out.pipeline = pipeline.name();
  out.labels = set.labels();
  out.values.resize(i, i - 2);
  out.negative_predictions.assign(static_cast<std::size_t>(i - 2), 0);
  for (Index n = 0; n < i; ++n) {
    const auto& fold = folds[static_cast<std::size_t>(n)];
    out.values.row(n) = fold.press;
    for (std::size_t m = 0; m < fold.negative.size(); ++m) out.negative_predictions[m] += fold.negative[m] ? 1 : 0;
    out.notes.insert(out.notes.end(), fold.notes.begin(), fold.notes.end());
  }
  return out;
}

void save_press_matrix(const std::filesystem::path& path, const PressMatrix& press) {
  std::vector<std::string> headers{"sample"};
  for (Index m = 1; m <= press.pcs(); ++m) headers.push_back("pc_" + std::to_string(m));
  save_matrix(path, press.values, headers, press.labels);
}

}  // namespace ramanpcr
