#include "ramanpcr/error.hpp"

namespace ramanpcr {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::IoFailure: return "IoFailure";
    case ErrorCode::BadHeader: return "BadHeader";
    case ErrorCode::NonmonotonicAxis: return "NonmonotonicAxis";
    case ErrorCode::RaggedRows: return "RaggedRows";
    case ErrorCode::NonFiniteValue: return "NonFiniteValue";
    case ErrorCode::TooFewSpectra: return "TooFewSpectra";
    case ErrorCode::LabelMismatch: return "LabelMismatch";
    case ErrorCode::NegativeConcentration: return "NegativeConcentration";
    case ErrorCode::EmptyMatrix: return "EmptyMatrix";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::AxisMismatch: return "AxisMismatch";
    case ErrorCode::InvalidParameter: return "InvalidParameter";
    case ErrorCode::ZeroVariance: return "ZeroVariance";
    case ErrorCode::DegenerateSubset: return "DegenerateSubset";
    case ErrorCode::WindowTooLarge: return "WindowTooLarge";
    case ErrorCode::BadOrder: return "BadOrder";
    case ErrorCode::NonuniformAxis: return "NonuniformAxis";
    case ErrorCode::WindowOutsideAxis: return "WindowOutsideAxis";
    case ErrorCode::NonpositivePeak: return "NonpositivePeak";
    case ErrorCode::PipelineSyntax: return "PipelineSyntax";
    case ErrorCode::StepFailure: return "StepFailure";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::SingularScores: return "SingularScores";
    case ErrorCode::FoldPreprocessFailure: return "FoldPreprocessFailure";
    case ErrorCode::DegenerateMatrix: return "DegenerateMatrix";
    case ErrorCode::AllCandidatesFailed: return "AllCandidatesFailed";
    case ErrorCode::RecipeSpeciesMismatch: return "RecipeSpeciesMismatch";
    case ErrorCode::ModelFormat: return "ModelFormat";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& detail)
    : std::runtime_error(std::string(to_string(code)) + (detail.empty() ? "" : " " + detail)),
      code_(code),
      detail_(detail) {}

}  // namespace ramanpcr
