#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ramanpcr {

enum class ErrorCode {
  IoFailure,
  BadHeader,
  NonmonotonicAxis,
  RaggedRows,
  NonFiniteValue,
  TooFewSpectra,
  LabelMismatch,
  NegativeConcentration,
  EmptyMatrix,
  ShapeMismatch,
  AxisMismatch,
  InvalidParameter,
  ZeroVariance,
  DegenerateSubset,
  WindowTooLarge,
  BadOrder,
  NonuniformAxis,
  WindowOutsideAxis,
  NonpositivePeak,
  PipelineSyntax,
  StepFailure,
  NoConvergence,
  RankDeficient,
  SingularScores,
  FoldPreprocessFailure,
  DegenerateMatrix,
  AllCandidatesFailed,
  RecipeSpeciesMismatch,
  ModelFormat,
  ConfigError,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every library failure is reported through this type. `what()` starts with
/// the code name so command-line output can be matched by scripts.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail);

  ErrorCode code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace ramanpcr
