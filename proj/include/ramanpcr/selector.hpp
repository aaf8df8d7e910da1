#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ramanpcr/crossval.hpp"
#include "ramanpcr/pipeline.hpp"
#include "ramanpcr/regress.hpp"
#include "ramanpcr/significance.hpp"
#include "ramanpcr/spectra.hpp"

namespace ramanpcr {

struct SelectOptions {
  double alpha = 0.05;
  AnovaOptions anova;
  NipalsOptions nipals{1e-10, 500, true};
  unsigned threads = 1;
};

struct CandidateEntry {
  std::size_t index = 0;  // position in the candidate list
  std::string pipeline;
  bool failed = false;
  std::string error;
  PressMatrix press;
  PcVerdict verdict;
  /// Raw-scale ANOVA, kept for comparison when the test ran on log10 PRESS.
  std::optional<AnovaResult> raw_anova;
  double sum_press_at_optimal = 0.0;
  int negative_predictions_at_optimal = 0;
  double wall_seconds = 0.0;
};

struct SelectionReport {
  double alpha = 0.05;
  bool log10_press = false;
  std::vector<CandidateEntry> entries;
  std::size_t chosen_index = 0;
  std::string chosen_pipeline;
  int chosen_pc = 0;
  bool significant = false;  // the chosen pipeline passed the significance gate
  std::vector<std::string> alerts;
};

/// Cross-validates every candidate, keeps the ones whose PC count has a
/// significant effect on PRESS, and picks the candidate with the smallest
/// PRESS column sum at its own optimal PC. Significant candidates always win
/// over non-significant ones; if none is significant the same criterion is
/// applied to all of them and an alert is raised. Ties go to the earlier
/// candidate. Candidates that fail are reported, not fatal, unless all fail
/// (AllCandidatesFailed).
SelectionReport select_method(const SpectraSet& set, const ConcentrationSet& conc,
                              const std::vector<Pipeline>& candidates, const SelectOptions& options = {});

/// Pre-treats the full set, fits `pc_count` components and the regression.
/// pc_count must lie in [1, i - 1] (BadOrder otherwise).
PcrModel train_final(const SpectraSet& set, const ConcentrationSet& conc, const Pipeline& pipeline,
                     Index pc_count, const NipalsOptions& nipals = {1e-10, 500, true});

struct HoldoutEvaluation {
  Eigen::VectorXd rss;          // rss[m - 1]: total squared error with m components
  Eigen::MatrixXd species_rss;  // q x k, per-species squared error
  Eigen::MatrixXd predictions;  // q x r at the model's full component count
};

/// Applies the model's pipeline to the raw hold-out spectra and scores
/// predictions for every truncation m = 1..k against the known truth.
HoldoutEvaluation evaluate_holdout(const PcrModel& model, const SpectraSet& holdout, const ConcentrationSet& truth);

/// Default candidate grid.
std::vector<std::string> default_candidates();

}  // namespace ramanpcr
