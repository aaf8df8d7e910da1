#include "ramanpcr/selector.hpp"

#include <chrono>
#include <cmath>
#include <limits>

#include "ramanpcr/parallel.hpp"

namespace ramanpcr {

namespace {

CandidateEntry evaluate_candidate(const SpectraSet& set, const ConcentrationSet& conc, const Pipeline& pipeline,
                                  std::size_t index, const SelectOptions& options, unsigned fold_threads) {
  const auto start = std::chrono::steady_clock::now();
  CandidateEntry entry;
  entry.index = index;
  entry.pipeline = pipeline.name();
  try {
    CrossvalOptions cv;
    cv.nipals = options.nipals;
    cv.threads = fold_threads;
    entry.press = loo_press_matrix(set, conc, pipeline, cv);
    entry.verdict = select_optimal_pc(entry.press, options.alpha, options.anova);
    if (options.anova.log10_press) {
      try {
        entry.raw_anova = anova_oneway(entry.press, options.alpha);
      } catch (const Error&) {
        entry.raw_anova.reset();
      }
    }
    const auto column = static_cast<std::size_t>(entry.verdict.optimal_pc - 1);
    entry.sum_press_at_optimal = entry.verdict.sum_press[static_cast<Index>(column)];
    entry.negative_predictions_at_optimal = entry.press.negative_predictions[column];
  } catch (const Error& e) {
    entry.failed = true;
    entry.error = e.what();
  }
  entry.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return entry;
}

}  // namespace

std::vector<std::string> default_candidates() {
  return {"identity",
          "snv",
          "rnv(75)",
          "rnv(90)",
          "savgol(7,2,0)",
          "derivative(1)",
          "derivative(2)",
          "baseline_als(1e5,0.01,10)",
          "despike(7,8)",
          "baseline_als(1e5,0.01,10)|rnv(75)",
          "baseline_als(1e5,0.01,10)|rnv(90)",
          "despike(7,8)|baseline_als(1e5,0.01,10)",
          "savgol(7,2,0)|derivative(2)"};
}

SelectionReport select_method(const SpectraSet& set, const ConcentrationSet& conc,
                              const std::vector<Pipeline>& candidates, const SelectOptions& options) {
  if (candidates.empty()) throw Error(ErrorCode::InvalidParameter, "no candidate pipelines");
  if (!(options.alpha > 0.0 && options.alpha < 1.0))
    throw Error(ErrorCode::InvalidParameter, "alpha must lie in (0, 1)");
  require_spectra(set, 4);
  const ConcentrationSet aligned = align_to_labels(conc, set.labels());

  SelectionReport report;
  report.alpha = options.alpha;
  report.log10_press = options.anova.log10_press;
  report.entries.resize(candidates.size());
  // Parallelise across candidates when there are several, across folds otherwise.
  const unsigned outer = candidates.size() > 1 ? options.threads : 1;
  const unsigned inner = candidates.size() > 1 ? 1 : options.threads;
  parallel_for(candidates.size(), outer, [&](std::size_t c) {
    report.entries[c] = evaluate_candidate(set, aligned, candidates[c], c, options, inner);
  });

  int best = -1;
  bool best_significant = false;
  std::vector<std::size_t> tied;
  for (std::size_t c = 0; c < report.entries.size(); ++c) {
    const auto& e = report.entries[c];
    if (e.failed) {
      report.alerts.push_back("candidate " + std::to_string(c) + " (" + e.pipeline + ") failed: " + e.error);
      continue;
    }
    if (!e.verdict.significant)
      report.alerts.push_back("candidate " + std::to_string(c) + " (" + e.pipeline + ") not significant (p=" +
                              format_number(e.verdict.anova.p_value) + ")");
    const double value = e.sum_press_at_optimal;
    const bool significant = e.verdict.significant;
    if (best < 0 || (significant && !best_significant)) {
      best = static_cast<int>(c);
      best_significant = significant;
      tied = {c};
      continue;
    }
    if (significant != best_significant) continue;
    const double incumbent = report.entries[static_cast<std::size_t>(best)].sum_press_at_optimal;
    if (value < incumbent) {
      best = static_cast<int>(c);
      tied = {c};
    } else if (value == incumbent) {
      tied.push_back(c);
    }
  }
  if (best < 0) throw Error(ErrorCode::AllCandidatesFailed, std::to_string(candidates.size()) + " candidates failed");

  const auto& chosen = report.entries[static_cast<std::size_t>(best)];
  report.chosen_index = static_cast<std::size_t>(best);
  report.chosen_pipeline = chosen.pipeline;
  report.chosen_pc = chosen.verdict.optimal_pc;
  report.significant = chosen.verdict.significant;
  if (tied.size() > 1) {
    std::string list;
    for (const auto c : tied) list += (list.empty() ? "" : ", ") + std::to_string(c);
    report.alerts.push_back("candidates " + list + " tie on PRESS sum; kept the first in list order");
  }
  if (!report.significant)
    report.alerts.push_back("no candidate pipeline produced a significant PC effect; chose the smallest PRESS sum "
                            "among all candidates, the pre-treatment choice is not qualified");
  if (chosen.negative_predictions_at_optimal > 0)
    report.alerts.push_back(std::to_string(chosen.negative_predictions_at_optimal) +
                            " held-out predictions with negative concentrations at the chosen PC count");
  return report;
}

PcrModel train_final(const SpectraSet& set, const ConcentrationSet& conc, const Pipeline& pipeline, Index pc_count,
                     const NipalsOptions& nipals) {
  if (pc_count < 1 || pc_count > set.rows() - 1)
    throw Error(ErrorCode::BadOrder, "pc_count=" + std::to_string(pc_count) + " outside [1, " +
                                         std::to_string(set.rows() - 1) + "]");
  const ConcentrationSet aligned = align_to_labels(conc, set.labels());
  const SpectraSet treated = apply_pipeline(set, pipeline);
  PcrModel model = pcr_fit(nipals_fit(treated, pc_count, nipals), aligned);
  model.pipeline = pipeline;
  return model;
}

HoldoutEvaluation evaluate_holdout(const PcrModel& model, const SpectraSet& holdout, const ConcentrationSet& truth) {
  if (model.pca.axis.size() > 0) require_same_axis(model.pca.axis, holdout.axis());
  const ConcentrationSet aligned = align_to_labels(truth, holdout.labels());
  if (aligned.species_count() != model.species_count())
    throw Error(ErrorCode::ShapeMismatch, "truth has " + std::to_string(aligned.species_count()) +
                                              " species, model has " + std::to_string(model.species_count()));
  const SpectraSet treated = apply_pipeline(holdout, model.pipeline);
  const Index k = model.components();
  HoldoutEvaluation out;
  out.rss.resize(k);
  out.species_rss.resize(model.species_count(), k);
  for (Index m = 1; m <= k; ++m) {
    const Eigen::MatrixXd estimate = pcr_predict(model.truncated(m), treated);
    out.species_rss.col(m - 1) = (estimate - aligned.matrix()).rowwise().squaredNorm();
    out.rss[m - 1] = press(estimate, aligned.matrix());
    if (m == k) out.predictions = estimate;
  }
  return out;
}

}  // namespace ramanpcr
