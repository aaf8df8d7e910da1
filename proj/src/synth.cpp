#include "ramanpcr/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

#include "ramanpcr/error.hpp"

namespace ramanpcr {

namespace {

std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t stream, std::uint64_t salt) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                    static_cast<std::uint32_t>(salt)};
  return std::mt19937_64(seq);
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

Eigen::MatrixXd analyte_signal(const SynthRecipe& recipe, const ConcentrationSet& conc, const Eigen::VectorXd& axis) {
  const auto q = static_cast<Index>(recipe.species.size());
  Eigen::MatrixXd responses(q, axis.size());
  for (Index s = 0; s < q; ++s) {
    const auto& sp = recipe.species[static_cast<std::size_t>(s)];
    responses.row(s) = sp.response * lorentzian_sum(sp.peaks, axis).transpose();
  }
  Eigen::MatrixXd signal = conc.matrix().transpose() * responses;
  if (!recipe.background.empty()) signal.rowwise() += lorentzian_sum(recipe.background, axis).transpose();
  return signal;
}

// Recipe species order; conc rows are looked up by name.
ConcentrationSet match_species(const SynthRecipe& recipe, const ConcentrationSet& conc) {
  if (static_cast<Index>(recipe.species.size()) != conc.species_count())
    throw Error(ErrorCode::RecipeSpeciesMismatch, "recipe has " + std::to_string(recipe.species.size()) +
                                                      " species, concentrations have " +
                                                      std::to_string(conc.species_count()));
  Eigen::MatrixXd ordered(conc.species_count(), conc.samples());
  std::vector<std::string> names, units;
  for (std::size_t s = 0; s < recipe.species.size(); ++s) {
    const auto& name = recipe.species[s].name;
    const auto it = std::find(conc.species().begin(), conc.species().end(), name);
    if (it == conc.species().end())
      throw Error(ErrorCode::RecipeSpeciesMismatch, "no concentrations for species '" + name + "'");
    const auto row = static_cast<Index>(it - conc.species().begin());
    ordered.row(static_cast<Index>(s)) = conc.matrix().row(row);
    names.push_back(name);
    units.push_back(conc.units()[static_cast<std::size_t>(row)]);
  }
  return ConcentrationSet(std::move(ordered), std::move(names), std::move(units), conc.labels());
}

}  // namespace

Eigen::VectorXd AxisSpec::build() const {
  if (!(step > 0.0) || !(stop > start)) throw Error(ErrorCode::InvalidParameter, "axis needs start < stop and step > 0");
  const auto n = static_cast<Index>(std::floor((stop - start) / step + 1e-9)) + 1;
  Eigen::VectorXd axis(n);
  for (Index k = 0; k < n; ++k) axis[k] = start + static_cast<double>(k) * step;
  return axis;
}

void SynthRecipe::validate() const {
  const Eigen::VectorXd grid = axis.build();
  validate_axis(grid);
  const auto check_peaks = [&](const std::vector<Peak>& peaks, const std::string& owner) {
    for (const auto& p : peaks) {
      if (p.center < axis.start || p.center > axis.stop)
        throw Error(ErrorCode::InvalidParameter, owner + " peak at " + format_number(p.center) + " lies outside the axis");
      if (!(p.width > 0.0)) throw Error(ErrorCode::InvalidParameter, owner + " peak width must be > 0");
    }
  };
  if (species.empty()) throw Error(ErrorCode::InvalidParameter, "recipe has no species");
  for (const auto& s : species) {
    check_peaks(s.peaks, s.name);
    if (s.conc_min < 0.0 || s.conc_max < s.conc_min)
      throw Error(ErrorCode::InvalidParameter, s.name + " concentration range is invalid");
  }
  check_peaks(background, "background");
  if (noise < 0.0) throw Error(ErrorCode::InvalidParameter, "noise must be >= 0");
  if (baseline.scale_max < baseline.scale_min) throw Error(ErrorCode::InvalidParameter, "baseline scale range is invalid");
  if (baseline.kind == BaselineKind::Exponential && (baseline.coefficients.size() != 2 || !(baseline.coefficients[1] > 0.0)))
    throw Error(ErrorCode::InvalidParameter, "exponential baseline needs {amplitude, decay > 0}");
  if (spikes.rate < 0.0 || spikes.amplitude_max < spikes.amplitude_min)
    throw Error(ErrorCode::InvalidParameter, "spike settings are invalid");
  if (!(drift_min > 0.0) || drift_max < drift_min) throw Error(ErrorCode::InvalidParameter, "drift range is invalid");
}

Eigen::VectorXd lorentzian_sum(const std::vector<Peak>& peaks, const Eigen::VectorXd& axis) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(axis.size());
  for (const auto& p : peaks) {
    const double half = 0.5 * p.width;
    out.array() += p.amplitude / (1.0 + ((axis.array() - p.center) / half).square());
  }
  return out;
}

double reference_peak_height(const SynthRecipe& recipe, const ConcentrationSet& conc) {
  const ConcentrationSet ordered = match_species(recipe, conc);
  return analyte_signal(recipe, ordered, recipe.axis.build()).maxCoeff();
}

SpectraSet generate(const SynthRecipe& recipe, const ConcentrationSet& conc) {
  recipe.validate();
  const ConcentrationSet ordered = match_species(recipe, conc);
  const Eigen::VectorXd axis = recipe.axis.build();
  const Index j = axis.size();
  const Eigen::MatrixXd signal = analyte_signal(recipe, ordered, axis);
  const double reference = std::max(signal.maxCoeff(), 0.0);
  const double sigma = recipe.noise * reference;
  const Eigen::ArrayXd u = (axis.array() - axis[0]) / (axis[j - 1] - axis[0]);

  Eigen::MatrixXd spectra(ordered.samples(), j);
  for (Index n = 0; n < ordered.samples(); ++n) {
    auto rng = make_engine(recipe.seed, static_cast<std::uint64_t>(n), 0x5eed);
    const double drift = uniform(rng, recipe.drift_min, recipe.drift_max);

    Eigen::ArrayXd baseline = Eigen::ArrayXd::Zero(j);
    const auto& b = recipe.baseline;
    if (b.kind == BaselineKind::Polynomial) {
      Eigen::ArrayXd power = Eigen::ArrayXd::Ones(j);
      for (const double c : b.coefficients) {
        baseline += uniform(rng, b.scale_min, b.scale_max) * c * power;
        power *= u;
      }
    } else if (b.kind == BaselineKind::Exponential) {
      baseline = uniform(rng, b.scale_min, b.scale_max) * b.coefficients[0] * (-u / b.coefficients[1]).exp();
    }

    Eigen::ArrayXd row = drift * (signal.row(n).transpose().array() + baseline);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (Index k = 0; k < j; ++k) row[k] += sigma * gauss(rng);

    if (recipe.spikes.rate > 0.0) {
      const int count = std::poisson_distribution<int>(recipe.spikes.rate)(rng);
      std::uniform_int_distribution<Index> where(0, j - 1);
      for (int s = 0; s < count; ++s) {
        const Index k = where(rng);
        row[k] += reference * uniform(rng, recipe.spikes.amplitude_min, recipe.spikes.amplitude_max);
      }
    }
    spectra.row(n) = row.transpose();
  }
  return SpectraSet(axis, std::move(spectra), ordered.labels());
}

ConcentrationSet random_concentrations(const SynthRecipe& recipe, Index n, std::uint64_t seed) {
  auto rng = make_engine(seed, 0, 0xc0c0);
  const auto q = static_cast<Index>(recipe.species.size());
  Eigen::MatrixXd matrix(q, n);
  for (Index c = 0; c < n; ++c)
    for (Index s = 0; s < q; ++s) {
      const auto& sp = recipe.species[static_cast<std::size_t>(s)];
      matrix(s, c) = uniform(rng, sp.conc_min, sp.conc_max);
    }
  std::vector<std::string> names, units, labels;
  for (const auto& sp : recipe.species) {
    names.push_back(sp.name);
    units.push_back(sp.unit);
  }
  for (Index c = 0; c < n; ++c) {
    char buffer[16];
    std::snprintf(buffer, sizeof buffer, "s%03d", static_cast<int>(c + 1));
    labels.emplace_back(buffer);
  }
  return ConcentrationSet(std::move(matrix), std::move(names), std::move(units), std::move(labels));
}

SynthRecipe tears_recipe(std::uint64_t seed) {
  SynthRecipe recipe;
  recipe.axis = {400.0, 1800.0, 2.0};
  recipe.species.push_back({"glucose",
                            "mg/mL",
                            {{425.0, 14.0, 0.5}, {520.0, 12.0, 0.6}, {1060.0, 14.0, 0.8}, {1125.0, 16.0, 1.0},
                             {1365.0, 18.0, 0.4}},
                            1.0,
                            0.0,
                            1.0});
  recipe.species.push_back({"lysozyme",
                            "mg/mL",
                            {{760.0, 10.0, 0.5}, {1003.0, 8.0, 0.7}, {1240.0, 20.0, 0.4}, {1450.0, 16.0, 0.6},
                             {1655.0, 18.0, 1.0}},
                            0.1,
                            0.0,
                            10.0});
  recipe.background = {{1640.0, 80.0, 0.8}};
  recipe.baseline = {BaselineKind::Polynomial, {3.0, -2.0, 1.5}, 0.5, 1.5};
  recipe.noise = 0.01;
  recipe.spikes = {0.5, 2.0, 5.0};
  recipe.drift_min = 0.8;
  recipe.drift_max = 1.2;
  recipe.seed = seed;
  return recipe;
}

std::pair<SpectraSet, ConcentrationSet> tears_phantom(Index n, std::uint64_t seed) {
  if (n < 4) throw Error(ErrorCode::TooFewSpectra, "tears phantom needs n >= 4");
  const SynthRecipe recipe = tears_recipe(seed);
  ConcentrationSet conc = random_concentrations(recipe, n, seed);
  SpectraSet spectra = generate(recipe, conc);
  return {std::move(spectra), std::move(conc)};
}

}  // namespace ramanpcr
