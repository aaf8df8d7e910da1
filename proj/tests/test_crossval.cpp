#include <doctest.h>

#include <cmath>
#include <random>

#include "ramanpcr/crossval.hpp"
#include "ramanpcr/preprocess.hpp"
#include "ramanpcr/regress.hpp"
#include "support.hpp"

using namespace ramanpcr;

namespace {

std::pair<SpectraSet, ConcentrationSet> noisy_mixture(Index q, Index i, std::uint64_t seed, double noise) {
  auto [set, conc] = support::noiseless_mixture(q, i, seed);
  std::mt19937_64 rng(seed + 1000);
  const Eigen::MatrixXd m = set.matrix() + noise * support::random_matrix(i, set.channels(), rng);
  return {set.with_matrix(m), conc};
}

// Hold out n, SNV each spectrum by hand, fit k components from scratch.
Eigen::MatrixXd brute_force_snv(const SpectraSet& set, const ConcentrationSet& conc) {
  const Index i = set.rows();
  Eigen::MatrixXd out(i, i - 2);
  for (Index n = 0; n < i; ++n) {
    std::vector<Index> keep;
    for (Index r = 0; r < i; ++r)
      if (r != n) keep.push_back(r);
    Eigen::MatrixXd train(i - 1, set.channels());
    for (std::size_t r = 0; r < keep.size(); ++r)
      train.row(static_cast<Index>(r)) = snv(set.matrix().row(keep[r]).transpose()).transpose();
    const Eigen::MatrixXd held = snv(set.matrix().row(n).transpose()).transpose();
    const ConcentrationSet train_conc = conc.select_columns(keep);
    for (Index k = 1; k <= i - 2; ++k) {
      const PcrModel model = pcr_fit(nipals_fit(train, k), train_conc);
      out(n, k - 1) = press(pcr_predict(model, held), conc.matrix().col(n));
    }
  }
  return out;
}

// Same loop with PCA from a dense SVD and regression by normal equations.
Eigen::MatrixXd svd_oracle(const SpectraSet& set, const ConcentrationSet& conc) {
  const Index i = set.rows();
  Eigen::MatrixXd out(i, i - 2);
  for (Index n = 0; n < i; ++n) {
    Eigen::MatrixXd train(i - 1, set.channels());
    Eigen::MatrixXd c(conc.species_count(), i - 1);
    for (Index r = 0, w = 0; r < i; ++r) {
      if (r == n) continue;
      train.row(w) = set.matrix().row(r);
      c.col(w++) = conc.matrix().col(r);
    }
    const Eigen::RowVectorXd mean = train.colwise().mean();
    const Eigen::MatrixXd xc = train.rowwise() - mean;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(xc, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd cmean = c.rowwise().mean();
    const Eigen::MatrixXd cc = c.colwise() - cmean;
    for (Index k = 1; k <= i - 2; ++k) {
      const Eigen::MatrixXd p = svd.matrixV().leftCols(k);
      const Eigen::MatrixXd t = xc * p;
      const Eigen::MatrixXd b = cc * t * (t.transpose() * t).inverse();
      const Eigen::VectorXd est = b * (p.transpose() * (set.matrix().row(n) - mean).transpose()) + cmean;
      out(n, k - 1) = (est - conc.matrix().col(n)).squaredNorm();
    }
  }
  return out;
}

}  // namespace

TEST_CASE("shape law") {
  const auto [set, conc] = noisy_mixture(2, 5, 1, 0.01);
  const PressMatrix s = loo_press_matrix(set, conc, Pipeline());
  CHECK(s.samples() == 5);
  CHECK(s.pcs() == 3);
  CHECK(s.labels == set.labels());
  CHECK(s.pipeline == "identity");
  CHECK(s.negative_predictions.size() == 3);
}

TEST_CASE("matches a brute-force loop for i = 4 and i = 5") {
  for (const Index i : {Index{4}, Index{5}}) {
    CAPTURE(i);
    const auto [set, conc] = noisy_mixture(2, i, 10 + static_cast<std::uint64_t>(i), 0.02);
    const PressMatrix s = loo_press_matrix(set, conc, Pipeline::parse("snv"));
    const Eigen::MatrixXd oracle = brute_force_snv(set, conc);
    CHECK((s.values - oracle).cwiseAbs().maxCoeff() < 1e-9);

    const PressMatrix raw = loo_press_matrix(set, conc, Pipeline());
    const Eigen::MatrixXd dense = svd_oracle(set, conc);
    CHECK((raw.values - dense).cwiseAbs().maxCoeff() < 1e-9 * std::max(1.0, dense.cwiseAbs().maxCoeff()));
  }
}

TEST_CASE("noiseless mixtures collapse at m = q") {
  const auto [set, conc] = support::noiseless_mixture(3, 8, 77);
  const PressMatrix s = loo_press_matrix(set, conc, Pipeline());
  CHECK(s.pcs() == 6);
  CHECK(s.values.col(2).maxCoeff() < 1e-10);
  CHECK(s.values.col(1).minCoeff() > 1e-6);
  for (Index m = 3; m < s.pcs(); ++m)
    for (Index n = 0; n < s.samples(); ++n) {
      const double v = s.values(n, m);
      CHECK((std::isnan(v) || v < 1e-10));
    }
}

TEST_CASE("thread count does not change a single bit") {
  const auto [set, conc] = noisy_mixture(2, 12, 3, 0.05);
  CrossvalOptions one, four;
  four.threads = 4;
  const PressMatrix a = loo_press_matrix(set, conc, Pipeline::parse("snv"), one);
  const PressMatrix b = loo_press_matrix(set, conc, Pipeline::parse("snv"), four);
  CHECK(a.values.cwiseEqual(b.values).all());
  CHECK(a.notes == b.notes);
}

TEST_CASE("label alignment and preprocessing failures") {
  const auto [set, conc] = noisy_mixture(2, 6, 4, 0.01);
  std::vector<Index> reversed{5, 4, 3, 2, 1, 0};
  const PressMatrix a = loo_press_matrix(set, conc, Pipeline());
  const PressMatrix b = loo_press_matrix(set, conc.select_columns(reversed), Pipeline());
  CHECK(a.values == b.values);

  Eigen::MatrixXd m = set.matrix();
  m.row(2).setConstant(1.0);
  try {
    loo_press_matrix(set.with_matrix(m), conc, Pipeline::parse("snv"));
    FAIL("expected FoldPreprocessFailure");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::FoldPreprocessFailure);
  }
}

TEST_CASE("press matrix CSV") {
  support::TempDir dir("press_csv");
  const auto [set, conc] = noisy_mixture(1, 4, 5, 0.01);
  const PressMatrix s = loo_press_matrix(set, conc, Pipeline());
  save_press_matrix(dir / "s.csv", s);
  const std::string text = support::slurp(dir / "s.csv");
  CHECK(text.rfind("sample,pc_1,pc_2\nx1,", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 5);
}
