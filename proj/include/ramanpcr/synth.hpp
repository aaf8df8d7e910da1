#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "ramanpcr/spectra.hpp"

namespace ramanpcr {

/// Lorentzian line: centre and full width at half maximum in cm^-1.
struct Peak {
  double center = 0.0;
  double width = 10.0;
  double amplitude = 1.0;
};

struct SynthSpecies {
  std::string name;
  std::string unit;
  std::vector<Peak> peaks;
  double response = 1.0;  // signal per unit concentration
  double conc_min = 0.0;  // range used by random_concentrations
  double conc_max = 1.0;
};

struct AxisSpec {
  double start = 400.0;
  double stop = 1800.0;
  double step = 2.0;

  Eigen::VectorXd build() const;
};

enum class BaselineKind { None, Polynomial, Exponential };

/// Polynomial: sum_k c_k u^k with u in [0, 1] across the axis, every
/// coefficient scaled by its own random factor. Exponential: c_0 exp(-u / c_1)
/// with c_0 scaled by a random factor.
struct BaselineSpec {
  BaselineKind kind = BaselineKind::None;
  std::vector<double> coefficients;
  double scale_min = 1.0;
  double scale_max = 1.0;
};

/// Spike count per spectrum is Poisson(rate); amplitudes are relative to
/// the reference peak height.
struct SpikeSpec {
  double rate = 0.0;
  double amplitude_min = 0.0;
  double amplitude_max = 0.0;
};

/// Every spectrum is drift * (sum_s c_s response_s + background + baseline)
/// + noise + spikes. Peak lists are synthetic; they make no claim to match
/// real Raman cross-sections.
struct SynthRecipe {
  AxisSpec axis;
  std::vector<SynthSpecies> species;
  std::vector<Peak> background;  // present at unit weight in every spectrum
  BaselineSpec baseline;
  double noise = 0.0;  // Gaussian sd relative to the reference peak height
  SpikeSpec spikes;
  double drift_min = 1.0;
  double drift_max = 1.0;
  std::uint64_t seed = 0;

  void validate() const;
};

Eigen::VectorXd lorentzian_sum(const std::vector<Peak>& peaks, const Eigen::VectorXd& axis);

/// Largest noiseless, baseline-free signal over the set (before drift); the
/// unit for the noise and spike settings.
double reference_peak_height(const SynthRecipe& recipe, const ConcentrationSet& conc);

/// Deterministic given (recipe, concentrations): spectrum n draws from its
/// own generator seeded by (seed, n).
SpectraSet generate(const SynthRecipe& recipe, const ConcentrationSet& conc);

/// Uniform draws within each species' [conc_min, conc_max]; labels s001...
ConcentrationSet random_concentrations(const SynthRecipe& recipe, Index n, std::uint64_t seed);

/// Artificial tears: glucose 0-1 mg/mL and lysozyme 0-10 mg/mL with baseline
/// drift, amplitude drift, noise and occasional spikes.
SynthRecipe tears_recipe(std::uint64_t seed);
std::pair<SpectraSet, ConcentrationSet> tears_phantom(Index n, std::uint64_t seed);

}  // namespace ramanpcr
