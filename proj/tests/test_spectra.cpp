#include <doctest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "ramanpcr/crossval.hpp"
#include "ramanpcr/error.hpp"
#include "ramanpcr/spectra.hpp"
#include "support.hpp"

using namespace ramanpcr;

namespace {

std::string wide_csv(Index channels, Index spectra, double start = 400.0) {
  std::ostringstream s;
  s << "wavenumber_cm-1";
  for (Index n = 0; n < spectra; ++n) s << ",sp" << n + 1;
  s << "\n";
  for (Index c = 0; c < channels; ++c) {
    s << start + static_cast<double>(c);
    for (Index n = 0; n < spectra; ++n) s << "," << std::sin(0.01 * static_cast<double>(c * (n + 1))) + 2.0;
    s << "\n";
  }
  return s.str();
}

ErrorCode code_of(const auto& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::IoFailure;
}

}  // namespace

TEST_CASE("three-column file loads as two spectra; cross-validation refuses it") {
  support::TempDir dir("spectra_i2");
  support::spit(dir / "s.csv", wide_csv(500, 2));
  const SpectraSet set = load_spectra(dir / "s.csv");
  CHECK(set.rows() == 2);
  CHECK(set.channels() == 500);
  CHECK(set.labels() == std::vector<std::string>{"sp1", "sp2"});

  const ConcentrationSet conc(Eigen::MatrixXd::Ones(1, 2), {"a"}, {""}, {"sp1", "sp2"});
  CHECK(code_of([&] { loo_press_matrix(set, conc, Pipeline()); }) == ErrorCode::TooFewSpectra);
}

TEST_CASE("decreasing axis is rejected with the file line") {
  support::TempDir dir("spectra_mono");
  std::string text = "wavenumber_cm-1,a\n400,1\n399,1\n401,1\n";
  for (int k = 0; k < 8; ++k) text += std::to_string(402 + k) + ",1\n";
  support::spit(dir / "s.csv", text);
  try {
    load_spectra(dir / "s.csv");
    FAIL("expected NonmonotonicAxis");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonmonotonicAxis);
    CHECK(std::string(e.what()).find("row=3") != std::string::npos);
  }
}

TEST_CASE("ragged and non-numeric rows") {
  support::TempDir dir("spectra_ragged");
  std::string text = wide_csv(10, 3);
  const auto pos = text.find('\n', text.find('\n', text.find('\n') + 1) + 1);  // end of line 3
  text.insert(pos, ",9");
  support::spit(dir / "r.csv", text);
  try {
    load_spectra(dir / "r.csv");
    FAIL("expected RaggedRows");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::RaggedRows);
    CHECK(std::string(e.what()).rfind("RaggedRows row=3", 0) == 0);
  }

  support::spit(dir / "n.csv", "wavenumber_cm-1,a\n1,2\n2,abc\n3,1\n4,1\n5,1\n6,1\n7,1\n8,1\n");
  CHECK(code_of([&] { load_spectra(dir / "n.csv"); }) == ErrorCode::NonFiniteValue);
  support::spit(dir / "h.csv", "wn,a\n1,2\n");
  CHECK(code_of([&] { load_spectra(dir / "h.csv"); }) == ErrorCode::BadHeader);
  CHECK(code_of([&] { load_spectra(dir / "missing.csv"); }) == ErrorCode::IoFailure);
}

TEST_CASE("save/load round trip is stable at 9 significant digits") {
  support::TempDir dir("spectra_rt");
  std::mt19937_64 rng(5);
  const Eigen::MatrixXd m = support::random_matrix(4, 30, rng) * 1234.5;
  const SpectraSet set(support::test_axis(30, 400.0, 2.5), m, support::labels(4));
  save_spectra(dir / "a.csv", set);
  const SpectraSet back = load_spectra(dir / "a.csv");
  save_spectra(dir / "b.csv", back);
  CHECK(support::slurp(dir / "a.csv") == support::slurp(dir / "b.csv"));
  CHECK(back.labels() == set.labels());
  CHECK((back.matrix() - m).cwiseAbs().maxCoeff() <= 1e-8 * m.cwiseAbs().maxCoeff());
}

TEST_CASE("concentrations: alignment, negatives, shape") {
  support::TempDir dir("conc");
  support::spit(dir / "s.csv", wide_csv(12, 3));
  support::spit(dir / "c.csv", "species,unit,sp3,sp1,sp2\nglucose,mg/mL,3,1,2\nlysozyme,mg/mL,30,10,20\n");
  const SpectraSet set = load_spectra(dir / "s.csv");
  const ConcentrationSet conc = load_concentrations(dir / "c.csv", set);
  CHECK(conc.labels() == set.labels());
  CHECK(conc.matrix()(0, 0) == 1.0);
  CHECK(conc.matrix()(0, 2) == 3.0);
  CHECK(conc.matrix()(1, 1) == 20.0);
  CHECK(conc.units()[0] == "mg/mL");

  support::spit(dir / "neg.csv", "species,sp1,sp2,sp3\na,1,-0.1,2\n");
  CHECK(code_of([&] { load_concentrations(dir / "neg.csv"); }) == ErrorCode::NegativeConcentration);

  support::spit(dir / "other.csv", "species,sp1,sp2,zz\na,1,1,2\n");
  CHECK(code_of([&] { load_concentrations(dir / "other.csv", set); }) == ErrorCode::LabelMismatch);

  std::string wide = "species";
  for (int n = 1; n <= 27; ++n) wide += ",s" + std::to_string(n);
  wide += "\nx";
  for (int n = 1; n <= 27; ++n) wide += ",0.5";
  wide += "\ny";
  for (int n = 1; n <= 27; ++n) wide += ",1.5";
  support::spit(dir / "q2.csv", wide + "\n");
  const ConcentrationSet q2 = load_concentrations(dir / "q2.csv");
  CHECK(q2.species_count() == 2);
  CHECK(q2.samples() == 27);
}

TEST_CASE("save_matrix writes a header and one line per row") {
  support::TempDir dir("matrix");
  Eigen::MatrixXd m(2, 3);
  m << 1, 2, 3, 4, std::numeric_limits<double>::quiet_NaN(), 6;
  const std::vector<std::string> headers{"a", "b", "c"};
  save_matrix(dir / "m.csv", m, headers);
  CHECK(support::slurp(dir / "m.csv") == "a,b,c\n1,2,3\n4,nan,6\n");
  CHECK(code_of([&] { save_matrix(dir / "e.csv", Eigen::MatrixXd(0, 0), {}); }) == ErrorCode::EmptyMatrix);
}
