#include "ramanpcr/pipeline.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>

#include "csv.hpp"
#include "ramanpcr/error.hpp"
#include "ramanpcr/preprocess.hpp"

namespace ramanpcr {

namespace {

std::string shortest(double value, std::chars_format format) {
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof buffer, value, format);
  return std::string(buffer, result.ptr);
}

// "1e+05" -> "1e5", "1e-05" -> "1e-5"
std::string compact_exponent(std::string text) {
  const auto e = text.find('e');
  if (e == std::string::npos) return text;
  std::string mantissa = text.substr(0, e);
  std::string exponent = text.substr(e + 1);
  bool negative = false;
  if (!exponent.empty() && (exponent[0] == '+' || exponent[0] == '-')) {
    negative = exponent[0] == '-';
    exponent.erase(0, 1);
  }
  exponent.erase(0, std::min(exponent.find_first_not_of('0'), exponent.size() - 1));
  return mantissa + "e" + (negative ? "-" : "") + exponent;
}

std::string lower(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

int as_int(double value, std::string_view what) {
  if (value != std::floor(value) || std::abs(value) > 1e9)
    throw Error(ErrorCode::PipelineSyntax, std::string(what) + " must be an integer");
  return static_cast<int>(value);
}

PipelineStep make_step(const std::string& name, const std::vector<double>& args, std::string_view token) {
  const auto arity = [&](std::size_t lo, std::size_t hi) {
    if (args.size() < lo || args.size() > hi)
      throw Error(ErrorCode::PipelineSyntax, "wrong number of arguments in '" + std::string(token) + "'");
  };
  if (name == "snv") {
    arity(0, 0);
    return PipelineStep::snv();
  }
  if (name == "rnv") {
    arity(1, 1);
    return PipelineStep::rnv(args[0]);
  }
  if (name == "savgol" || name == "sg" || name == "savitzky_golay") {
    arity(0, 3);
    const int window = args.size() > 0 ? as_int(args[0], "savgol window") : 7;
    const int polyorder = args.size() > 1 ? as_int(args[1], "savgol polyorder") : 2;
    const int deriv = args.size() > 2 ? as_int(args[2], "savgol deriv") : 0;
    return PipelineStep::savitzky_golay(window, polyorder, deriv);
  }
  if (name == "derivative" || name == "deriv") {
    arity(1, 1);
    return PipelineStep::derivative(as_int(args[0], "derivative order"));
  }
  if (name == "baseline_als" || name == "als" || name == "baseline") {
    arity(0, 3);
    const step::BaselineAls defaults;
    return PipelineStep::baseline_als(args.size() > 0 ? args[0] : defaults.lambda,
                                      args.size() > 1 ? args[1] : defaults.p,
                                      args.size() > 2 ? as_int(args[2], "baseline iterations")
                                                      : defaults.iterations);
  }
  if (name == "despike") {
    arity(0, 2);
    const step::Despike defaults;
    return PipelineStep::despike(args.size() > 0 ? as_int(args[0], "despike window") : defaults.window,
                                 args.size() > 1 ? args[1] : defaults.threshold);
  }
  if (name == "peak_normalize" || name == "peak") {
    arity(1, 2);
    return PipelineStep::peak_normalize(args[0], args.size() > 1 ? args[1] : 10.0);
  }
  throw Error(ErrorCode::PipelineSyntax, "unknown step '" + std::string(token) + "'");
}

}  // namespace

std::string format_parameter(double value) {
  const std::string fixed = shortest(value, std::chars_format::fixed);
  const std::string scientific = compact_exponent(shortest(value, std::chars_format::scientific));
  return scientific.size() < fixed.size() ? scientific : fixed;
}

PipelineStep PipelineStep::snv() { return PipelineStep(step::Snv{}); }

PipelineStep PipelineStep::rnv(double percentile) {
  if (!(percentile > 0.0 && percentile < 100.0))
    throw Error(ErrorCode::InvalidParameter, "rnv percentile must lie in (0, 100)");
  return PipelineStep(step::Rnv{percentile});
}

PipelineStep PipelineStep::savitzky_golay(int window, int polyorder, int deriv) {
  if (window < 5 || window % 2 == 0)
    throw Error(ErrorCode::InvalidParameter, "savgol window must be odd and >= 5");
  if (polyorder < 0 || polyorder >= window) throw Error(ErrorCode::BadOrder, "savgol polyorder must be < window");
  if (deriv < 0 || deriv > polyorder) throw Error(ErrorCode::BadOrder, "savgol deriv must be <= polyorder");
  return PipelineStep(step::SavitzkyGolay{window, polyorder, deriv});
}

PipelineStep PipelineStep::derivative(int order) {
  if (order != 1 && order != 2) throw Error(ErrorCode::BadOrder, "derivative order must be 1 or 2");
  return PipelineStep(step::Derivative{order});
}

PipelineStep PipelineStep::baseline_als(double lambda, double p, int iterations) {
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw Error(ErrorCode::InvalidParameter, "baseline lambda must be > 0");
  if (!(p > 0.0 && p < 1.0)) throw Error(ErrorCode::InvalidParameter, "baseline asymmetry must lie in (0, 1)");
  if (iterations < 1) throw Error(ErrorCode::InvalidParameter, "baseline iterations must be >= 1");
  return PipelineStep(step::BaselineAls{lambda, p, iterations});
}

PipelineStep PipelineStep::despike(int window, double threshold) {
  if (window < 3 || window % 2 == 0) throw Error(ErrorCode::InvalidParameter, "despike window must be odd and >= 3");
  if (!(threshold > 0.0) || !std::isfinite(threshold))
    throw Error(ErrorCode::InvalidParameter, "despike threshold must be > 0");
  return PipelineStep(step::Despike{window, threshold});
}

PipelineStep PipelineStep::peak_normalize(double reference, double half_width) {
  if (!std::isfinite(reference)) throw Error(ErrorCode::InvalidParameter, "reference wavenumber must be finite");
  if (!(half_width >= 0.0) || !std::isfinite(half_width))
    throw Error(ErrorCode::InvalidParameter, "half width must be >= 0");
  return PipelineStep(step::PeakNormalize{reference, half_width});
}

std::string PipelineStep::name() const {
  struct Namer {
    static std::string num(double v) { return format_parameter(v); }
    static std::string integer(int v) { return std::to_string(v); }
    std::string operator()(const step::Snv&) const { return "snv"; }
    std::string operator()(const step::Rnv& s) const { return "rnv(" + num(s.percentile) + ")"; }
    std::string operator()(const step::SavitzkyGolay& s) const {
      return "savgol(" + integer(s.window) + "," + integer(s.polyorder) + "," + integer(s.deriv) + ")";
    }
    std::string operator()(const step::Derivative& s) const { return "derivative(" + integer(s.order) + ")"; }
    std::string operator()(const step::BaselineAls& s) const {
      return "baseline_als(" + num(s.lambda) + "," + num(s.p) + "," + integer(s.iterations) + ")";
    }
    std::string operator()(const step::Despike& s) const {
      return "despike(" + integer(s.window) + "," + num(s.threshold) + ")";
    }
    std::string operator()(const step::PeakNormalize& s) const {
      return "peak_normalize(" + num(s.reference) + "," + num(s.half_width) + ")";
    }
  };
  return std::visit(Namer{}, params_);
}

Eigen::VectorXd PipelineStep::apply(const Eigen::VectorXd& x, const Eigen::VectorXd& axis) const {
  struct Apply {
    const Eigen::VectorXd& x;
    const Eigen::VectorXd& axis;
    Eigen::VectorXd operator()(const step::Snv&) const { return ramanpcr::snv(x); }
    Eigen::VectorXd operator()(const step::Rnv& s) const { return ramanpcr::rnv(x, s.percentile); }
    Eigen::VectorXd operator()(const step::SavitzkyGolay& s) const {
      const double spacing = s.deriv > 0 ? uniform_spacing(axis) : 1.0;
      return ramanpcr::savitzky_golay(x, s.window, s.polyorder, s.deriv, spacing);
    }
    Eigen::VectorXd operator()(const step::Derivative& s) const { return ramanpcr::derivative(x, axis, s.order); }
    Eigen::VectorXd operator()(const step::BaselineAls& s) const {
      return ramanpcr::baseline_als(x, s.lambda, s.p, s.iterations).corrected;
    }
    Eigen::VectorXd operator()(const step::Despike& s) const { return ramanpcr::despike(x, s.window, s.threshold); }
    Eigen::VectorXd operator()(const step::PeakNormalize& s) const {
      return ramanpcr::peak_normalize(x, axis, s.reference, s.half_width);
    }
  };
  return std::visit(Apply{x, axis}, params_);
}

Pipeline::Pipeline() : name_("identity") {}

Pipeline::Pipeline(std::vector<PipelineStep> steps) : steps_(std::move(steps)) {
  if (steps_.empty()) {
    name_ = "identity";
    return;
  }
  for (std::size_t s = 0; s < steps_.size(); ++s) name_ += (s ? "|" : "") + steps_[s].name();
}

Pipeline Pipeline::parse(std::string_view text) {
  const std::string spec = lower(trim(text));
  if (spec.empty() || spec == "identity" || spec == "none") return Pipeline();
  std::vector<PipelineStep> steps;
  std::size_t start = 0;
  while (start <= spec.size()) {
    const auto bar = spec.find('|', start);
    const std::string_view token = trim(std::string_view(spec).substr(start, bar - start));
    if (token.empty()) throw Error(ErrorCode::PipelineSyntax, "empty step in '" + spec + "'");
    std::string name;
    std::vector<double> args;
    const auto open = token.find('(');
    if (open == std::string_view::npos) {
      name = std::string(token);
    } else {
      if (token.back() != ')') throw Error(ErrorCode::PipelineSyntax, "missing ')' in '" + std::string(token) + "'");
      name = std::string(trim(token.substr(0, open)));
      const std::string_view inner = trim(token.substr(open + 1, token.size() - open - 2));
      if (!inner.empty()) {
        std::size_t a = 0;
        while (true) {
          const auto comma = inner.find(',', a);
          const std::string_view field = trim(inner.substr(a, comma - a));
          double value = 0.0;
          if (!detail::parse_double(field, value) || !std::isfinite(value))
            throw Error(ErrorCode::PipelineSyntax, "bad number '" + std::string(field) + "' in '" +
                                                       std::string(token) + "'");
          args.push_back(value);
          if (comma == std::string_view::npos) break;
          a = comma + 1;
        }
      }
    }
    if (name != "identity" && name != "none") steps.push_back(make_step(name, args, token));
    if (bar == std::string::npos) break;
    start = bar + 1;
  }
  return Pipeline(std::move(steps));
}

Eigen::VectorXd Pipeline::apply(const Eigen::VectorXd& intensities, const Eigen::VectorXd& axis) const {
  Eigen::VectorXd x = intensities;
  for (const auto& s : steps_) x = s.apply(x, axis);
  return x;
}

SpectraSet apply_pipeline(const SpectraSet& set, const Pipeline& pipeline) {
  if (pipeline.empty()) return set;
  Eigen::MatrixXd out(set.rows(), set.channels());
  for (Index n = 0; n < set.rows(); ++n) {
    Eigen::VectorXd x = set.matrix().row(n).transpose();
    for (const auto& s : pipeline.steps()) {
      try {
        x = s.apply(x, set.axis());
      } catch (const Error& e) {
        throw Error(e.code(), "spectrum='" + set.labels()[n] + "' step=" + s.name() + ": " + e.detail());
      }
    }
    out.row(n) = x.transpose();
  }
  return set.with_matrix(std::move(out));
}

}  // namespace ramanpcr
