#pragma once

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "ramanpcr/spectra.hpp"

namespace ramanpcr {

namespace step {

struct Snv {};
struct Rnv {
  double percentile;
};
struct SavitzkyGolay {
  int window;
  int polyorder;
  int deriv;
};
struct Derivative {
  int order;
};
struct BaselineAls {
  double lambda = 1e5;
  double p = 0.01;
  int iterations = 10;
};
struct Despike {
  int window = 7;
  double threshold = 8.0;
};
struct PeakNormalize {
  double reference;
  double half_width = 10.0;
};

}  // namespace step

enum class StepKind { Snv, Rnv, SavitzkyGolay, Derivative, BaselineAls, Despike, PeakNormalize };

/// One validated pre-treatment. Instances only come out of the named
/// factories, which reject invalid parameters with InvalidParameter/BadOrder.
class PipelineStep {
 public:
  using Params = std::variant<step::Snv, step::Rnv, step::SavitzkyGolay, step::Derivative,
                              step::BaselineAls, step::Despike, step::PeakNormalize>;

  static PipelineStep snv();
  static PipelineStep rnv(double percentile);
  static PipelineStep savitzky_golay(int window, int polyorder, int deriv = 0);
  static PipelineStep derivative(int order);
  static PipelineStep baseline_als(double lambda = 1e5, double p = 0.01, int iterations = 10);
  static PipelineStep despike(int window = 7, double threshold = 8.0);
  static PipelineStep peak_normalize(double reference, double half_width = 10.0);

  StepKind kind() const noexcept { return static_cast<StepKind>(params_.index()); }
  const Params& params() const noexcept { return params_; }
  /// Canonical text form, e.g. `rnv(75)`.
  std::string name() const;

  Eigen::VectorXd apply(const Eigen::VectorXd& intensities, const Eigen::VectorXd& axis) const;

 private:
  explicit PipelineStep(Params params) : params_(params) {}
  Params params_;
};

/// Ordered list of steps. Its name is a pure function of the steps, so two
/// pipelines compare equal exactly when their names do.
class Pipeline {
 public:
  Pipeline();
  explicit Pipeline(std::vector<PipelineStep> steps);

  /// Grammar: `step(arg,...)|step(arg,...)`, case-insensitive. An empty
  /// string, `identity` or `none` is the empty pipeline.
  static Pipeline parse(std::string_view text);

  const std::vector<PipelineStep>& steps() const noexcept { return steps_; }
  const std::string& name() const noexcept { return name_; }
  bool empty() const noexcept { return steps_.empty(); }

  Eigen::VectorXd apply(const Eigen::VectorXd& intensities, const Eigen::VectorXd& axis) const;

  friend bool operator==(const Pipeline& a, const Pipeline& b) { return a.name_ == b.name_; }

 private:
  std::vector<PipelineStep> steps_;
  std::string name_;
};

/// Applies the pipeline to every spectrum independently. A failing step is
/// re-thrown with the spectrum label and step name attached.
SpectraSet apply_pipeline(const SpectraSet& set, const Pipeline& pipeline);

/// Shortest text that round-trips `value`, choosing the shorter of fixed and
/// exponent notation (`1e5`, `0.01`, `75`).
std::string format_parameter(double value);

}  // namespace ramanpcr
