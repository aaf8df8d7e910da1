#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ramanpcr/decompose.hpp"
#include "ramanpcr/pipeline.hpp"
#include "ramanpcr/spectra.hpp"

namespace ramanpcr {

/// Leave-one-out PRESS table: values(n, m) is the squared prediction error of
/// spectrum n held out, predicted with m + 1 components. Cells a fold could
/// not produce (rank-deficient or singular fold) are NaN and explained in
/// `notes`.
struct PressMatrix {
  Eigen::MatrixXd values;  // i x (i - 2)
  std::string pipeline;
  std::vector<std::string> labels;
  std::vector<std::string> notes;
  /// negative_predictions[m]: held-out samples with at least one negative
  /// predicted concentration at m + 1 components.
  std::vector<int> negative_predictions;

  Index samples() const noexcept { return values.rows(); }
  Index pcs() const noexcept { return values.cols(); }
};

struct CrossvalOptions {
  NipalsOptions nipals{1e-10, 500, true};
  unsigned threads = 1;
};

/// For each held-out spectrum: fit NIPALS once on the other i - 1 spectra
/// with k = i - 2, then for m = 1..i-2 refit the regression on the leading m
/// components and score the held-out prediction. Pre-treatment is applied per
/// spectrum, so the held-out spectrum is processed exactly like the training
/// ones. Requires i >= 4.
PressMatrix loo_press_matrix(const SpectraSet& set, const ConcentrationSet& conc, const Pipeline& pipeline,
                             const CrossvalOptions& options = {});

/// Rows labelled by held-out sample, columns `pc_1..pc_{i-2}`.
void save_press_matrix(const std::filesystem::path& path, const PressMatrix& press);

}  // namespace ramanpcr
