#pragma once

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace ramanpcr {

using Index = Eigen::Index;

/// One measured spectrum. Wavenumbers are in cm^-1, intensities in detector
/// counts; `meta` carries free-form acquisition notes (exposure, accumulations).
struct Spectrum {
  Eigen::VectorXd wavenumbers;
  Eigen::VectorXd intensities;
  std::string label;
  std::map<std::string, std::string> meta;

  /// Throws NonmonotonicAxis, NonFiniteValue, ShapeMismatch or InvalidParameter.
  void validate() const;
};

/// Spectra sharing one wavenumber axis. Row n of `matrix()` is spectrum n;
/// columns are channels. Immutable once built.
class SpectraSet {
 public:
  SpectraSet() = default;
  SpectraSet(Eigen::VectorXd axis, Eigen::MatrixXd matrix, std::vector<std::string> labels);

  const Eigen::VectorXd& axis() const noexcept { return axis_; }
  const Eigen::MatrixXd& matrix() const noexcept { return matrix_; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }

  Index rows() const noexcept { return matrix_.rows(); }
  Index channels() const noexcept { return matrix_.cols(); }

  Spectrum spectrum(Index n) const;
  SpectraSet select_rows(std::span<const Index> rows) const;
  SpectraSet without_row(Index n) const;
  /// Same axis and labels, new intensities (used after preprocessing).
  SpectraSet with_matrix(Eigen::MatrixXd matrix) const;

 private:
  Eigen::VectorXd axis_;
  Eigen::MatrixXd matrix_;
  std::vector<std::string> labels_;
};

/// Known analyte concentrations: q species (rows) by i samples (columns).
class ConcentrationSet {
 public:
  ConcentrationSet() = default;
  ConcentrationSet(Eigen::MatrixXd matrix, std::vector<std::string> species,
                   std::vector<std::string> units, std::vector<std::string> labels);

  const Eigen::MatrixXd& matrix() const noexcept { return matrix_; }
  const std::vector<std::string>& species() const noexcept { return species_; }
  const std::vector<std::string>& units() const noexcept { return units_; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }

  Index species_count() const noexcept { return matrix_.rows(); }
  Index samples() const noexcept { return matrix_.cols(); }

  ConcentrationSet select_columns(std::span<const Index> columns) const;
  ConcentrationSet with_matrix(Eigen::MatrixXd matrix) const;

 private:
  Eigen::MatrixXd matrix_;
  std::vector<std::string> species_;
  std::vector<std::string> units_;
  std::vector<std::string> labels_;
};

void validate_axis(const Eigen::VectorXd& axis);

/// Throws TooFewSpectra when the set has fewer than `minimum` rows.
void require_spectra(const SpectraSet& set, Index minimum);

/// Throws AxisMismatch unless both axes are identical channel for channel.
void require_same_axis(const Eigen::VectorXd& expected, const Eigen::VectorXd& actual);

/// Wide CSV: header `wavenumber_cm-1,<label>,...`, one row per channel.
SpectraSet load_spectra(const std::filesystem::path& path);
void save_spectra(const std::filesystem::path& path, const SpectraSet& set);

/// CSV `species,unit,<label>,...`; the unit column is optional. Columns are
/// returned in file order.
ConcentrationSet load_concentrations(const std::filesystem::path& path);
/// Same, re-ordered so that column n belongs to spectrum n of `spectra`.
ConcentrationSet load_concentrations(const std::filesystem::path& path, const SpectraSet& spectra);
ConcentrationSet align_to_labels(const ConcentrationSet& conc, std::span<const std::string> labels);
void save_concentrations(const std::filesystem::path& path, const ConcentrationSet& conc);

/// Writes `headers` then one line per matrix row. When `row_labels` is given
/// it becomes the first column and `headers` must include its title.
void save_matrix(const std::filesystem::path& path, const Eigen::MatrixXd& matrix,
                 std::span<const std::string> headers,
                 std::span<const std::string> row_labels = {});

/// 9 significant digits; NaN is written as `nan`.
std::string format_number(double value);

}  // namespace ramanpcr
