#include "ramanpcr/significance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "ramanpcr/error.hpp"
#include "ramanpcr/fdist.hpp"
#include "ramanpcr/stats.hpp"
#include "csv.hpp"

namespace ramanpcr {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<double> column_values(const Eigen::MatrixXd& m, Index c) {
  std::vector<double> out;
  for (Index r = 0; r < m.rows(); ++r)
    if (!std::isnan(m(r, c))) out.push_back(m(r, c));
  return out;
}

std::string pc_name(Index column) { return "pc_" + std::to_string(column + 1); }

// Competition ranking ("1224"): equal keys share the smallest rank.
std::vector<int> ranks(const std::vector<double>& keys) {
  std::vector<std::size_t> order(keys.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return keys[a] < keys[b]; });
  std::vector<int> out(keys.size());
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    const bool tied = pos > 0 && keys[order[pos]] == keys[order[pos - 1]];
    out[order[pos]] = tied ? out[order[pos - 1]] : static_cast<int>(pos) + 1;
  }
  return out;
}

int argmin_sum(const Eigen::VectorXd& sums) {
  int best = 0;
  double best_value = std::numeric_limits<double>::infinity();
  for (Index c = 0; c < sums.size(); ++c) {
    if (std::isnan(sums[c])) continue;
    if (best == 0 || sums[c] < best_value) {
      best = static_cast<int>(c) + 1;
      best_value = sums[c];
    }
  }
  return best;
}

std::string format_stat(double v) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.6g", v);
  return buffer;
}

}  // namespace

AnovaResult anova_oneway(const Eigen::MatrixXd& press, double alpha, const AnovaOptions& options) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorCode::InvalidParameter, "alpha must lie in (0, 1)");
  AnovaResult result;
  result.alpha = alpha;
  result.log10_press = options.log10_press;

  Eigen::MatrixXd values = press;
  if (options.log10_press) {
    double floor = std::numeric_limits<double>::infinity();
    for (Index k = 0; k < values.size(); ++k)
      if (values.data()[k] > 0.0) floor = std::min(floor, values.data()[k]);
    int clamped = 0;
    for (Index k = 0; k < values.size(); ++k) {
      double& v = values.data()[k];
      if (std::isnan(v)) continue;
      if (!(v > 0.0)) {
        v = std::isinf(floor) ? 1e-300 : floor;
        ++clamped;
      }
      v = std::log10(v);
    }
    if (clamped > 0)
      result.notes.push_back(std::to_string(clamped) + " non-positive PRESS cells raised to the smallest positive value before log10");
  }

  const Index columns = values.cols();
  result.group_means = Eigen::VectorXd::Constant(columns, kNaN);
  result.group_sizes.assign(static_cast<std::size_t>(columns), 0);
  std::vector<std::vector<double>> groups(static_cast<std::size_t>(columns));
  int kept = 0;
  int observations = 0;
  int missing = 0;
  for (Index c = 0; c < columns; ++c) {
    auto& g = groups[static_cast<std::size_t>(c)];
    g = column_values(values, c);
    std::sort(g.begin(), g.end());  // sums independent of row order
    missing += static_cast<int>(values.rows()) - static_cast<int>(g.size());
    if (g.empty()) {
      result.notes.push_back(pc_name(c) + " has no valid PRESS values and is excluded");
      continue;
    }
    ++kept;
    observations += static_cast<int>(g.size());
    result.group_sizes[static_cast<std::size_t>(c)] = static_cast<int>(g.size());
    result.group_means[c] = std::accumulate(g.begin(), g.end(), 0.0) / static_cast<double>(g.size());
  }
  if (missing > 0)
    result.notes.push_back(std::to_string(missing) + " NaN PRESS cells excluded from the ANOVA");
  if (kept < 2)
    throw Error(ErrorCode::DegenerateMatrix, "fewer than 2 PC columns with data");
  if (observations - kept < 1)
    throw Error(ErrorCode::DegenerateMatrix, "no within-group degrees of freedom");

  result.df_treat = kept - 1;
  result.df_error = observations - kept;

  double grand = 0.0;
  bool equal_means = true;
  double first_mean = kNaN;
  for (Index c = 0; c < columns; ++c) {
    const auto& g = groups[static_cast<std::size_t>(c)];
    if (g.empty()) continue;
    grand += std::accumulate(g.begin(), g.end(), 0.0);
    if (std::isnan(first_mean)) first_mean = result.group_means[c];
    equal_means = equal_means && result.group_means[c] == first_mean;
  }
  grand /= static_cast<double>(observations);

  for (Index c = 0; c < columns; ++c) {
    const auto& g = groups[static_cast<std::size_t>(c)];
    if (g.empty()) continue;
    const double mean = result.group_means[c];
    if (!equal_means) result.sst += static_cast<double>(g.size()) * (mean - grand) * (mean - grand);
    for (const double v : g) result.sse += (v - mean) * (v - mean);
  }

  result.mse = result.sse / result.df_error;
  result.f_critical = f_quantile(1.0 - alpha, result.df_treat, result.df_error);
  if (result.sst == 0.0 && result.sse == 0.0) {
    result.f = 0.0;
    result.p_value = 1.0;
    result.notes.push_back("DegenerateMatrix: every PRESS value is identical; treated as not significant");
  } else if (result.sse == 0.0) {
    result.f = std::numeric_limits<double>::infinity();
    result.p_value = 0.0;
  } else {
    result.f = (result.sst / result.df_treat) / result.mse;
    result.p_value = f_sf(result.f, result.df_treat, result.df_error);
  }
  result.significant = result.f > result.f_critical;
  return result;
}

AnovaResult anova_oneway(const PressMatrix& press, double alpha, const AnovaOptions& options) {
  return anova_oneway(press.values, alpha, options);
}

std::vector<BoxplotStats> boxplot_stats(const Eigen::MatrixXd& press) {
  std::vector<BoxplotStats> out;
  for (Index c = 0; c < press.cols(); ++c) {
    BoxplotStats s;
    const std::vector<double> values = column_values(press, c);
    s.count = static_cast<int>(values.size());
    if (values.empty()) {
      s.q1 = s.median = s.q3 = s.lo_whisker = s.hi_whisker = kNaN;
      out.push_back(s);
      continue;
    }
    std::vector<double> sorted = values;
    std::sort(sorted.begin(), sorted.end());
    s.q1 = percentile_sorted(sorted, 25.0);
    s.median = percentile_sorted(sorted, 50.0);
    s.q3 = percentile_sorted(sorted, 75.0);
    const double iqr = s.q3 - s.q1;
    const double lo_fence = s.q1 - 1.5 * iqr;
    const double hi_fence = s.q3 + 1.5 * iqr;
    s.lo_whisker = std::numeric_limits<double>::infinity();
    s.hi_whisker = -std::numeric_limits<double>::infinity();
    for (const double v : values) {
      if (v < lo_fence || v > hi_fence) {
        s.outliers.push_back(v);
      } else {
        s.lo_whisker = std::min(s.lo_whisker, v);
        s.hi_whisker = std::max(s.hi_whisker, v);
      }
    }
    out.push_back(s);
  }
  return out;
}

std::vector<BoxplotStats> boxplot_stats(const PressMatrix& press) { return boxplot_stats(press.values); }

void save_boxplot(const std::filesystem::path& path, const std::vector<BoxplotStats>& stats) {
  std::string text = "pc,q1,median,q3,lo_whisker,hi_whisker,outliers\n";
  for (std::size_t c = 0; c < stats.size(); ++c) {
    const auto& s = stats[c];
    text += std::to_string(c + 1) + "," + format_number(s.q1) + "," + format_number(s.median) + "," +
            format_number(s.q3) + "," + format_number(s.lo_whisker) + "," + format_number(s.hi_whisker) + ",";
    for (std::size_t o = 0; o < s.outliers.size(); ++o) text += (o ? ";" : "") + format_number(s.outliers[o]);
    text += '\n';
  }
  detail::write_text(path, text);
}

PcVerdict select_optimal_pc(const Eigen::MatrixXd& press, double alpha, const AnovaOptions& options) {
  PcVerdict verdict;
  const Index columns = press.cols();
  verdict.sum_press = Eigen::VectorXd::Constant(columns, kNaN);
  for (Index c = 0; c < columns; ++c) {
    auto values = column_values(press, c);
    std::sort(values.begin(), values.end());
    if (!values.empty()) verdict.sum_press[c] = std::accumulate(values.begin(), values.end(), 0.0);
  }
  verdict.boxplot = boxplot_stats(press);
  verdict.pairwise_p = Eigen::VectorXd::Constant(columns, kNaN);

  bool anova_ok = true;
  try {
    verdict.anova = anova_oneway(press, alpha, options);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::DegenerateMatrix) throw;
    anova_ok = false;
    verdict.anova = AnovaResult{};
    verdict.anova.alpha = alpha;
    verdict.anova.log10_press = options.log10_press;
    verdict.anova.group_means = Eigen::VectorXd::Constant(columns, kNaN);
    verdict.anova.notes.push_back(e.what());
  }
  for (const auto& note : verdict.anova.notes) verdict.alerts.push_back(note);

  if (anova_ok && verdict.anova.significant) {
    const auto& means = verdict.anova.group_means;
    const auto& sizes = verdict.anova.group_sizes;
    Index worst = -1;
    for (Index c = 0; c < columns; ++c)
      if (!std::isnan(means[c]) && (worst < 0 || means[c] > means[worst])) worst = c;
    verdict.worst_pc = static_cast<int>(worst) + 1;

    std::vector<Index> candidates;
    std::vector<double> candidate_means, candidate_p;
    for (Index c = 0; c < columns; ++c) {
      if (c == worst || std::isnan(means[c])) continue;
      const double diff = means[worst] - means[c];
      const double se = std::sqrt(verdict.anova.mse * (1.0 / sizes[static_cast<std::size_t>(worst)] +
                                                       1.0 / sizes[static_cast<std::size_t>(c)]));
      double p = 1.0;
      if (se > 0.0) {
        p = t_two_sided_p(diff / se, verdict.anova.df_error);
      } else if (diff != 0.0) {
        p = 0.0;
      }
      verdict.pairwise_p[c] = p;
      if (diff > 0.0 && p < alpha) {
        candidates.push_back(c);
        candidate_means.push_back(means[c]);
        candidate_p.push_back(p);
      }
    }

    if (!candidates.empty()) {
      const auto mean_rank = ranks(candidate_means);
      const auto p_rank = ranks(candidate_p);
      std::size_t best = 0;
      for (std::size_t k = 1; k < candidates.size(); ++k)
        if (mean_rank[k] + p_rank[k] < mean_rank[best] + p_rank[best]) best = k;
      verdict.significant = true;
      verdict.optimal_pc = static_cast<int>(candidates[best]) + 1;
      for (const Index c : candidates) verdict.candidate_set.push_back(static_cast<int>(c) + 1);
      return verdict;
    }
    verdict.alerts.push_back("ANOVA rejected equal means but no PC count is significantly better than " +
                             pc_name(worst) + "; treated as not significant");
  }

  verdict.significant = false;
  verdict.worst_pc = 0;
  verdict.optimal_pc = argmin_sum(verdict.sum_press);
  if (verdict.optimal_pc == 0) throw Error(ErrorCode::DegenerateMatrix, "PRESS matrix has no valid cells");
  verdict.alerts.push_back("pre-treatment rejected: PC count has no significant effect on PRESS (F=" +
                           format_stat(verdict.anova.f) + ", p=" + format_stat(verdict.anova.p_value) +
                           "); using the PC count with the smallest PRESS sum, " +
                           pc_name(verdict.optimal_pc - 1));
  return verdict;
}

PcVerdict select_optimal_pc(const PressMatrix& press, double alpha, const AnovaOptions& options) {
  PcVerdict verdict = select_optimal_pc(press.values, alpha, options);
  verdict.alerts.insert(verdict.alerts.begin(), press.notes.begin(), press.notes.end());
  return verdict;
}

}  // namespace ramanpcr
