#include <doctest.h>

#include <cmath>
#include <random>

#include "ramanpcr/error.hpp"
#include "ramanpcr/pipeline.hpp"
#include "ramanpcr/preprocess.hpp"
#include "support.hpp"

using namespace ramanpcr;

namespace {

SpectraSet wavy_set(Index rows, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const Eigen::VectorXd axis = support::test_axis(200, 400.0, 2.0);
  Eigen::MatrixXd m(rows, 200);
  std::uniform_real_distribution<double> u(0.5, 2.0);
  for (Index r = 0; r < rows; ++r) {
    const double a = u(rng), b = u(rng);
    m.row(r) = (a * (axis.array() / 37.0).sin() + b * axis.array() / 400.0 + 3.0 +
                2.0 / (1.0 + ((axis.array() - 700.0) / 5.0).square()))
                   .transpose();
  }
  return SpectraSet(axis, m, support::labels(rows));
}

ErrorCode parse_error(std::string_view text) {
  try {
    Pipeline::parse(text);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("parsed: " << text);
  return ErrorCode::IoFailure;
}

}  // namespace

TEST_CASE("canonical names") {
  CHECK(Pipeline().name() == "identity");
  CHECK(Pipeline::parse("").name() == "identity");
  CHECK(Pipeline::parse("None").name() == "identity");
  CHECK(Pipeline::parse("SNV").name() == "snv");
  CHECK(Pipeline::parse("Baseline_ALS(1e5, 0.01, 10) | RNV(75)").name() == "baseline_als(1e5,0.01,10)|rnv(75)");
  CHECK(Pipeline::parse("als|rnv(90)").name() == "baseline_als(1e5,0.01,10)|rnv(90)");
  CHECK(Pipeline::parse("sg").name() == "savgol(7,2,0)");
  CHECK(Pipeline::parse("savgol(9,3,1)|deriv(2)").name() == "savgol(9,3,1)|derivative(2)");
  CHECK(Pipeline::parse("despike").name() == "despike(7,8)");
  CHECK(Pipeline::parse("peak(1003)").name() == "peak_normalize(1003,10)");
  CHECK(Pipeline::parse("rnv(62.5)").name() == "rnv(62.5)");
  // Re-parsing a canonical name is a fixed point.
  for (const char* text : {"baseline_als(1e5,0.01,10)|rnv(75)", "savgol(7,2,0)|derivative(2)", "despike(7,8)"})
    CHECK(Pipeline::parse(Pipeline::parse(text).name()).name() == text);
  CHECK(Pipeline::parse("snv") == Pipeline(std::vector<PipelineStep>{PipelineStep::snv()}));
}

TEST_CASE("format_parameter picks the shorter exact form") {
  CHECK(format_parameter(1e5) == "1e5");
  CHECK(format_parameter(0.01) == "0.01");
  CHECK(format_parameter(75.0) == "75");
  CHECK(format_parameter(1e-7) == "1e-7");
  CHECK(format_parameter(123.25) == "123.25");
}

TEST_CASE("grammar errors") {
  CHECK(parse_error("rnv(") == ErrorCode::PipelineSyntax);
  CHECK(parse_error("frobnicate") == ErrorCode::PipelineSyntax);
  CHECK(parse_error("snv||rnv(75)") == ErrorCode::PipelineSyntax);
  CHECK(parse_error("rnv(abc)") == ErrorCode::PipelineSyntax);
  CHECK(parse_error("rnv(150)") == ErrorCode::InvalidParameter);
  CHECK(parse_error("derivative(3)") == ErrorCode::BadOrder);
  CHECK(parse_error("savgol(6,2,0)") == ErrorCode::InvalidParameter);
}

TEST_CASE("empty pipeline is the identity on the set") {
  const SpectraSet set = wavy_set(5, 1);
  const SpectraSet out = apply_pipeline(set, Pipeline());
  CHECK(out.matrix() == set.matrix());
  CHECK(out.labels() == set.labels());
}

TEST_CASE("snv pipeline normalises every row") {
  const SpectraSet out = apply_pipeline(wavy_set(6, 2), Pipeline::parse("snv"));
  for (Index r = 0; r < out.rows(); ++r) {
    const Eigen::VectorXd row = out.matrix().row(r).transpose();
    const double mean = row.mean();
    const double sd = std::sqrt((row.array() - mean).square().sum() / static_cast<double>(row.size() - 1));
    CHECK(std::abs(mean) < 1e-12);
    CHECK(std::abs(sd - 1.0) < 1e-12);
  }
}

TEST_CASE("composition equals hand-composed calls") {
  const SpectraSet set = wavy_set(3, 3);
  const SpectraSet out = apply_pipeline(set, Pipeline::parse("baseline_als(1e5,0.01,10)|rnv(75)"));
  for (Index r = 0; r < set.rows(); ++r) {
    const Eigen::VectorXd x = set.matrix().row(r).transpose();
    const Eigen::VectorXd hand = rnv(baseline_als(x, 1e5, 0.01, 10).corrected, 75.0);
    CHECK(out.matrix().row(r).transpose() == hand);
  }

  const SpectraSet d = apply_pipeline(set, Pipeline::parse("savgol(7,2,0)|derivative(2)"));
  const Eigen::VectorXd x0 = set.matrix().row(0).transpose();
  CHECK(d.matrix().row(0).transpose() == derivative(savitzky_golay(x0, 7, 2, 0), set.axis(), 2));
}

TEST_CASE("step failure names the spectrum and step") {
  Eigen::MatrixXd m = wavy_set(3, 4).matrix();
  m.row(1).setConstant(2.0);
  const SpectraSet set(support::test_axis(200, 400.0, 2.0), m, support::labels(3));
  try {
    apply_pipeline(set, Pipeline::parse("snv"));
    FAIL("expected failure");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ZeroVariance);
    const std::string what = e.what();
    CHECK(what.find("x2") != std::string::npos);
    CHECK(what.find("snv") != std::string::npos);
  }
}
