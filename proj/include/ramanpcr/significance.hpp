#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ramanpcr/crossval.hpp"

namespace ramanpcr {

struct AnovaOptions {
  /// Run the test on log10(PRESS) instead of raw PRESS.
  bool log10_press = false;
};

/// One-way ANOVA over the columns of a PRESS matrix: each column (PC count)
/// is a treatment group, each non-NaN cell an observation.
struct AnovaResult {
  double sst = 0.0;  // between-group sum of squares
  double sse = 0.0;  // within-group sum of squares
  double f = 0.0;
  double p_value = 1.0;
  double f_critical = 0.0;
  double mse = 0.0;  // sse / df_error, the pooled within-group variance
  int df_treat = 0;
  int df_error = 0;
  double alpha = 0.05;
  bool significant = false;  // f > f_critical
  bool log10_press = false;
  /// Column means on the tested scale; NaN for dropped columns.
  Eigen::VectorXd group_means;
  std::vector<int> group_sizes;
  std::vector<std::string> notes;
};

/// Requires at least two columns with data and df_error >= 1, otherwise
/// throws DegenerateMatrix. An all-constant table is not an error: it returns
/// F = 0, p = 1 with a note.
AnovaResult anova_oneway(const Eigen::MatrixXd& press, double alpha, const AnovaOptions& options = {});
AnovaResult anova_oneway(const PressMatrix& press, double alpha, const AnovaOptions& options = {});

/// Box-plot summary of one column: type-7 quartiles, whiskers at the most
/// extreme points within 1.5 IQR of the quartiles, everything else an outlier.
struct BoxplotStats {
  int count = 0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double lo_whisker = 0.0;
  double hi_whisker = 0.0;
  std::vector<double> outliers;  // in row order
};

std::vector<BoxplotStats> boxplot_stats(const Eigen::MatrixXd& press);
std::vector<BoxplotStats> boxplot_stats(const PressMatrix& press);

/// Columns `pc,q1,median,q3,lo_whisker,hi_whisker,outliers`; outliers are
/// `;`-separated.
void save_boxplot(const std::filesystem::path& path, const std::vector<BoxplotStats>& stats);

struct PcVerdict {
  bool significant = false;
  int optimal_pc = 0;               // 1-based
  int worst_pc = 0;                 // 1-based; 0 when not significant
  std::vector<int> candidate_set;   // 1-based, ascending
  Eigen::VectorXd sum_press;        // raw column sums over non-NaN cells
  Eigen::VectorXd pairwise_p;       // p of each column vs the worst one; NaN if not compared
  std::vector<BoxplotStats> boxplot;
  AnovaResult anova;
  std::vector<std::string> alerts;
};

/// Significance gate and PC choice. When the ANOVA rejects equal means, the
/// worst column (largest mean) is compared to every other column with a
/// pooled-variance t test; columns with a lower mean and p < alpha form the
/// candidate set. Candidates are ranked by mean PRESS and by p-value, and the
/// smallest rank sum wins, ties going to fewer PCs. Otherwise the verdict is
/// not significant and the PC with the smallest PRESS sum is returned with an
/// alert.
PcVerdict select_optimal_pc(const PressMatrix& press, double alpha, const AnovaOptions& options = {});
PcVerdict select_optimal_pc(const Eigen::MatrixXd& press, double alpha, const AnovaOptions& options = {});

}  // namespace ramanpcr
