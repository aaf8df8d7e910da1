#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "ramanpcr/crossval.hpp"
#include "ramanpcr/decompose.hpp"
#include "ramanpcr/pipeline.hpp"
#include "ramanpcr/preprocess.hpp"
#include "ramanpcr/significance.hpp"
#include "ramanpcr/stats.hpp"
#include "support.hpp"

using namespace ramanpcr;

namespace {

constexpr int kTrials = 50;

Eigen::VectorXd random_spectrum(Index n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const Eigen::VectorXd axis = support::test_axis(n);
  Eigen::VectorXd x = Eigen::VectorXd::Constant(n, u(rng));
  for (int p = 0; p < 4; ++p) {
    const double c = axis[0] + u(rng) * (axis[n - 1] - axis[0]), w = 5.0 + 20.0 * u(rng);
    x += (u(rng) / (1.0 + ((axis.array() - c) / (0.5 * w)).square())).matrix();
  }
  return x + 0.01 * support::random_matrix(n, 1, rng);
}

Eigen::VectorXd polynomial(const Eigen::VectorXd& t, const Eigen::VectorXd& coef) {
  Eigen::VectorXd y = Eigen::VectorXd::Zero(t.size());
  for (Index k = coef.size() - 1; k >= 0; --k) y = (y.array() * t.array() + coef[k]).matrix();
  return y;
}

double max_abs(const Eigen::VectorXd& v) { return v.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("snv: zero mean, unit sd, idempotent, affine invariant") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> scale(0.1, 50.0), shift(-100.0, 100.0);
  for (int t = 0; t < kTrials; ++t) {
    const Eigen::VectorXd x = random_spectrum(200, rng);
    const Eigen::VectorXd y = snv(x);
    CHECK(std::abs(y.mean()) < 1e-12);
    CHECK(std::abs(std::sqrt(y.squaredNorm() / 199.0) - 1.0) < 1e-12);
    CHECK(max_abs(snv(y) - y) < 1e-12);
    const Eigen::VectorXd moved = (scale(rng) * x.array() + shift(rng)).matrix();
    CHECK(max_abs(snv(moved) - y) < 1e-9);
  }
}

TEST_CASE("rnv: affine invariant and blind to values above the percentile") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> scale(0.1, 50.0), shift(-100.0, 100.0), boost(1.0, 100.0);
  for (int t = 0; t < kTrials; ++t) {
    const Eigen::VectorXd x = random_spectrum(200, rng);
    const double pct = t % 2 ? 75.0 : 90.0;
    const Eigen::VectorXd y = rnv(x, pct);
    const double a = scale(rng);
    CHECK(max_abs(rnv((a * x.array() + shift(rng)).matrix(), pct) - y) < 1e-8);

    // Inflate values above the order statistic next to the centre; channels at
    // or below the centre keep their output.
    const double centre = percentile(x, pct);
    double next = std::numeric_limits<double>::infinity();
    for (Index k = 0; k < x.size(); ++k)
      if (x[k] > centre) next = std::min(next, x[k]);
    Eigen::VectorXd spiked = x;
    const double factor = boost(rng);
    for (Index k = 0; k < x.size(); ++k)
      if (x[k] > next) spiked[k] = next + factor * (x[k] - next) + 1.0;
    const Eigen::VectorXd z = rnv(spiked, pct);
    for (Index k = 0; k < x.size(); ++k)
      if (x[k] <= centre) CHECK(std::abs(z[k] - y[k]) < 1e-12);
  }
}

TEST_CASE("savitzky-golay reproduces polynomials up to its order") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> half(2, 8), order(0, 4);
  for (int t = 0; t < kTrials; ++t) {
    const int window = 2 * half(rng) + 1;
    const int p = std::min(order(rng), window - 1);
    const Eigen::VectorXd time = Eigen::VectorXd::LinSpaced(80, -1.0, 1.0);
    const double h = time[1] - time[0];
    const Eigen::VectorXd coef = support::random_matrix(p + 1, 1, rng);
    const Eigen::VectorXd y = polynomial(time, coef);
    CAPTURE(window);
    CAPTURE(p);
    CHECK(max_abs(savitzky_golay(y, window, p) - y) < 1e-10);
    if (p >= 1) {
      Eigen::VectorXd dcoef(p);
      for (int k = 1; k <= p; ++k) dcoef[k - 1] = k * coef[k];
      CHECK(max_abs(savitzky_golay(y, window, p, 1, h) - polynomial(time, dcoef)) < 1e-8);
    }
    // Linear in the input.
    const Eigen::VectorXd a = support::random_matrix(80, 1, rng), b = support::random_matrix(80, 1, rng);
    CHECK(max_abs(savitzky_golay(2.0 * a - b, window, p) - (2.0 * savitzky_golay(a, window, p) - savitzky_golay(b, window, p))) <
          1e-12);
  }
}

TEST_CASE("finite differences are exact on low-order polynomials") {
  std::mt19937_64 rng(4);
  const Eigen::VectorXd axis = support::test_axis(60, 500.0, 2.0);
  const Eigen::VectorXd u = (axis.array() - 560.0) / 60.0;
  for (int t = 0; t < kTrials; ++t) {
    const Eigen::VectorXd c = support::random_matrix(3, 1, rng);
    const Eigen::VectorXd line = (c[0] + c[1] * axis.array()).matrix();
    CHECK(max_abs(derivative(line, axis, 1) - Eigen::VectorXd::Constant(60, c[1])) < 1e-10);
    CHECK(max_abs(derivative(line, axis, 2)) < 1e-10);
    const Eigen::VectorXd quad = (c[2] * u.array().square()).matrix();
    // Central differences are exact for quadratics inside the range.
    const Eigen::VectorXd d2 = derivative(quad, axis, 2);
    CHECK(max_abs(d2 - Eigen::VectorXd::Constant(60, 2.0 * c[2] / 3600.0)) < 1e-12);
  }
}

TEST_CASE("despike leaves smooth spectra alone and removes isolated spikes") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<Index> where(10, 189);
  for (int t = 0; t < kTrials; ++t) {
    const Eigen::VectorXd axis = support::test_axis(200);
    const Eigen::VectorXd smooth = (1.0 / (1.0 + ((axis.array() - 800.0) / 200.0).square())).matrix();
    CHECK(despike(smooth, 7, 8.0) == smooth);
    Eigen::VectorXd spiked = smooth + 1e-3 * support::random_matrix(200, 1, rng);
    const Eigen::VectorXd base = spiked;
    const Index k = where(rng);
    spiked[k] += 5.0;
    const Eigen::VectorXd cleaned = despike(spiked, 7, 8.0);
    CHECK(std::abs(cleaned[k] - smooth[k]) < 0.05);
    Index changed = 0;
    for (Index n = 0; n < 200; ++n)
      if (n != k && cleaned[n] != base[n]) ++changed;
    CHECK(changed <= 4);
  }
}

TEST_CASE("als correction is unchanged by adding a straight line") {
  std::mt19937_64 rng(6);
  for (int t = 0; t < 10; ++t) {
    const Eigen::VectorXd x = random_spectrum(300, rng);
    const Eigen::VectorXd line = Eigen::VectorXd::LinSpaced(300, 0.0, 1.0) * support::random_matrix(1, 1, rng)(0, 0);
    const BaselineEstimate a = baseline_als(x, 1e5, 0.01, 10);
    const BaselineEstimate b = baseline_als(x + line, 1e5, 0.01, 10);
    CHECK(max_abs(a.corrected - b.corrected) < 1e-6);
    CHECK(max_abs(a.corrected + a.baseline - x) < 1e-12);
  }
}

TEST_CASE("pipelines act on each spectrum independently") {
  std::mt19937_64 rng(7);
  const Index i = 9, j = 150;
  Eigen::MatrixXd m(i, j);
  for (Index r = 0; r < i; ++r) m.row(r) = random_spectrum(j, rng).transpose();
  const SpectraSet set(support::test_axis(j), m, support::labels(i));
  for (const std::string text : {"snv", "rnv(75)", "savgol(7,2,0)|derivative(1)", "baseline_als|rnv(90)"}) {
    CAPTURE(text);
    const Pipeline p = Pipeline::parse(text);
    const Eigen::MatrixXd whole = apply_pipeline(set, p).matrix();
    for (Index r = 0; r < i; ++r) {
      const std::vector<Index> one{r};
      CHECK(apply_pipeline(set.select_rows(one), p).matrix().row(0) == whole.row(r));
    }
    CHECK(Pipeline::parse(p.name()).name() == p.name());
  }
}

TEST_CASE("nipals: orthogonal scores, orthonormal loadings") {
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<Index> rows(5, 20), cols(25, 60);
  for (int t = 0; t < 20; ++t) {
    const Index r = rows(rng), c = cols(rng);
    // Well separated singular values so every component converges.
    const Eigen::MatrixXd u = support::random_matrix(r, r, rng).householderQr().householderQ();
    const Eigen::MatrixXd v = support::random_matrix(c, r, rng).householderQr().householderQ() *
                              Eigen::MatrixXd::Identity(c, r);
    const Eigen::VectorXd sv = Eigen::VectorXd::LinSpaced(r, 0.0, -0.7 * static_cast<double>(r - 1)).array().exp() * 10.0;
    const Eigen::MatrixXd x = u * sv.asDiagonal() * v.transpose();
    const Index k = std::min(r - 1, Index{5});
    const PcaModel pca = nipals_fit(x, k);
    const Eigen::MatrixXd ptp = pca.loadings.transpose() * pca.loadings;
    CHECK((ptp - Eigen::MatrixXd::Identity(k, k)).cwiseAbs().maxCoeff() < 1e-8);
    Eigen::MatrixXd tt = pca.scores.transpose() * pca.scores;
    tt.diagonal().setZero();
    CHECK(tt.cwiseAbs().maxCoeff() < 1e-6 * pca.scores.squaredNorm());
    // Full rank reconstructs the centred data.
    const PcaModel full = nipals_fit(x, r - 1);
    const Eigen::MatrixXd centred = x.rowwise() - x.colwise().mean();
    CHECK((full.scores * full.loadings.transpose() - centred).cwiseAbs().maxCoeff() < 1e-6);
  }
}

TEST_CASE("press matrix follows a permutation of the samples") {
  auto [set, conc] = support::noiseless_mixture(2, 8, 13);
  std::mt19937_64 rng(9);
  const SpectraSet noisy = set.with_matrix(set.matrix() + 0.02 * support::random_matrix(8, set.channels(), rng));
  const PressMatrix a = loo_press_matrix(noisy, conc, Pipeline::parse("snv"));
  std::vector<Index> order{3, 7, 0, 5, 1, 6, 2, 4};
  const PressMatrix b = loo_press_matrix(noisy.select_rows(order), conc.select_columns(order), Pipeline::parse("snv"));
  for (Index n = 0; n < 8; ++n)
    for (Index m = 0; m < a.pcs(); ++m)
      CHECK(b.values(n, m) == doctest::Approx(a.values(order[static_cast<std::size_t>(n)], m)).epsilon(1e-8));
}

TEST_CASE("anova F is invariant to positive scaling and shifts") {
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> scale(0.01, 100.0);
  for (int t = 0; t < kTrials; ++t) {
    const Eigen::MatrixXd s = support::random_matrix(10, 6, rng).array().abs();
    const AnovaResult a = anova_oneway(s, 0.05);
    const AnovaResult b = anova_oneway((scale(rng) * s.array() + scale(rng)).matrix(), 0.05);
    CHECK(b.f == doctest::Approx(a.f).epsilon(1e-9));
    CHECK(b.significant == a.significant);
    CHECK(b.p_value == doctest::Approx(a.p_value).epsilon(1e-7));
  }
}
