#include "ramanpcr/spectra.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "csv.hpp"
#include "ramanpcr/error.hpp"

namespace ramanpcr {

namespace detail {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

}  // namespace

std::vector<CsvRow> read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot open " + path.string());
  std::vector<CsvRow> rows;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    std::string_view view = trim(line);
    if (number == 1 && view.starts_with("\xEF\xBB\xBF")) view.remove_prefix(3);
    if (view.empty()) continue;
    CsvRow row{number, {}};
    std::size_t start = 0;
    while (true) {
      const auto comma = view.find(',', start);
      row.fields.emplace_back(trim(view.substr(start, comma - start)));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    rows.push_back(std::move(row));
  }
  if (in.bad()) throw Error(ErrorCode::IoFailure, "read error on " + path.string());
  return rows;
}

bool parse_double(std::string_view text, double& out) {
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  if (text.empty()) return false;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc() && ptr == text.data() + text.size();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoFailure, "cannot open " + path.string() + " for writing");
  out << text;
  out.flush();
  if (!out) throw Error(ErrorCode::IoFailure, "write failed on " + path.string());
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace detail

namespace {

constexpr std::string_view kAxisHeader = "wavenumber_cm-1";
constexpr Index kMinChannels = 8;

void require_unique(const std::vector<std::string>& labels, std::string_view what) {
  std::unordered_set<std::string> seen;
  for (const auto& label : labels) {
    if (label.empty()) throw Error(ErrorCode::BadHeader, "empty " + std::string(what) + " label");
    if (!seen.insert(label).second)
      throw Error(ErrorCode::BadHeader, "duplicate " + std::string(what) + " label '" + label + "'");
  }
}

}  // namespace

void validate_axis(const Eigen::VectorXd& axis) {
  for (Index c = 0; c < axis.size(); ++c) {
    if (!std::isfinite(axis[c]))
      throw Error(ErrorCode::NonFiniteValue, "axis channel=" + std::to_string(c));
    if (c > 0 && !(axis[c] > axis[c - 1]))
      throw Error(ErrorCode::NonmonotonicAxis, "channel=" + std::to_string(c) + " value=" +
                                                   format_number(axis[c]) + " after " +
                                                   format_number(axis[c - 1]));
  }
  if (axis.size() < kMinChannels)
    throw Error(ErrorCode::InvalidParameter,
                "axis has " + std::to_string(axis.size()) + " channels; at least 8 required");
}

void Spectrum::validate() const {
  validate_axis(wavenumbers);
  if (intensities.size() != wavenumbers.size())
    throw Error(ErrorCode::ShapeMismatch, "spectrum '" + label + "' has " +
                                              std::to_string(intensities.size()) +
                                              " intensities for " +
                                              std::to_string(wavenumbers.size()) + " channels");
  if (!intensities.allFinite())
    throw Error(ErrorCode::NonFiniteValue, "spectrum '" + label + "'");
}

SpectraSet::SpectraSet(Eigen::VectorXd axis, Eigen::MatrixXd matrix, std::vector<std::string> labels)
    : axis_(std::move(axis)), matrix_(std::move(matrix)), labels_(std::move(labels)) {
  validate_axis(axis_);
  if (matrix_.cols() != axis_.size())
    throw Error(ErrorCode::RaggedRows, "matrix has " + std::to_string(matrix_.cols()) +
                                          " channels, axis has " + std::to_string(axis_.size()));
  if (static_cast<Index>(labels_.size()) != matrix_.rows())
    throw Error(ErrorCode::ShapeMismatch, std::to_string(labels_.size()) + " labels for " +
                                              std::to_string(matrix_.rows()) + " spectra");
  for (Index n = 0; n < matrix_.rows(); ++n) {
    if (!matrix_.row(n).allFinite())
      throw Error(ErrorCode::NonFiniteValue, "spectrum '" + labels_[n] + "'");
  }
}

Spectrum SpectraSet::spectrum(Index n) const {
  return Spectrum{axis_, matrix_.row(n).transpose(), labels_.at(n), {}};
}

SpectraSet SpectraSet::select_rows(std::span<const Index> rows) const {
  Eigen::MatrixXd sub(static_cast<Index>(rows.size()), matrix_.cols());
  std::vector<std::string> labels;
  labels.reserve(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    sub.row(static_cast<Index>(r)) = matrix_.row(rows[r]);
    labels.push_back(labels_.at(rows[r]));
  }
  return SpectraSet(axis_, std::move(sub), std::move(labels));
}

SpectraSet SpectraSet::without_row(Index n) const {
  std::vector<Index> keep;
  for (Index r = 0; r < rows(); ++r)
    if (r != n) keep.push_back(r);
  return select_rows(keep);
}

SpectraSet SpectraSet::with_matrix(Eigen::MatrixXd matrix) const {
  return SpectraSet(axis_, std::move(matrix), labels_);
}

ConcentrationSet::ConcentrationSet(Eigen::MatrixXd matrix, std::vector<std::string> species,
                                   std::vector<std::string> units, std::vector<std::string> labels)
    : matrix_(std::move(matrix)),
      species_(std::move(species)),
      units_(std::move(units)),
      labels_(std::move(labels)) {
  if (units_.empty()) units_.assign(species_.size(), "");
  if (static_cast<Index>(species_.size()) != matrix_.rows() || units_.size() != species_.size())
    throw Error(ErrorCode::ShapeMismatch, std::to_string(species_.size()) + " species names for " +
                                              std::to_string(matrix_.rows()) + " rows");
  if (static_cast<Index>(labels_.size()) != matrix_.cols())
    throw Error(ErrorCode::ShapeMismatch, std::to_string(labels_.size()) + " sample labels for " +
                                              std::to_string(matrix_.cols()) + " columns");
  if (!matrix_.allFinite()) throw Error(ErrorCode::NonFiniteValue, "concentration matrix");
}

ConcentrationSet ConcentrationSet::select_columns(std::span<const Index> columns) const {
  Eigen::MatrixXd sub(matrix_.rows(), static_cast<Index>(columns.size()));
  std::vector<std::string> labels;
  for (std::size_t c = 0; c < columns.size(); ++c) {
    sub.col(static_cast<Index>(c)) = matrix_.col(columns[c]);
    labels.push_back(labels_.at(columns[c]));
  }
  return ConcentrationSet(std::move(sub), species_, units_, std::move(labels));
}

ConcentrationSet ConcentrationSet::with_matrix(Eigen::MatrixXd matrix) const {
  return ConcentrationSet(std::move(matrix), species_, units_, labels_);
}

void require_spectra(const SpectraSet& set, Index minimum) {
  if (set.rows() < minimum)
    throw Error(ErrorCode::TooFewSpectra, "i=" + std::to_string(set.rows()) + "; at least " +
                                              std::to_string(minimum) + " spectra required");
}

void require_same_axis(const Eigen::VectorXd& expected, const Eigen::VectorXd& actual) {
  if (expected.size() != actual.size())
    throw Error(ErrorCode::AxisMismatch, "expected " + std::to_string(expected.size()) +
                                             " channels, got " + std::to_string(actual.size()));
  for (Index c = 0; c < expected.size(); ++c) {
    if (expected[c] != actual[c])
      throw Error(ErrorCode::AxisMismatch, "channel=" + std::to_string(c) + " expected " +
                                               format_number(expected[c]) + " got " +
                                               format_number(actual[c]));
  }
}

SpectraSet load_spectra(const std::filesystem::path& path) {
  const auto rows = detail::read_csv(path);
  if (rows.empty()) throw Error(ErrorCode::BadHeader, "empty file " + path.string());
  const auto& header = rows.front().fields;
  if (header.front() != kAxisHeader)
    throw Error(ErrorCode::BadHeader, "first column must be '" + std::string(kAxisHeader) +
                                          "', found '" + header.front() + "'");
  if (header.size() < 2) throw Error(ErrorCode::BadHeader, "no spectrum columns");
  std::vector<std::string> labels(header.begin() + 1, header.end());
  require_unique(labels, "spectrum");

  const auto channels = static_cast<Index>(rows.size() - 1);
  const auto spectra = static_cast<Index>(labels.size());
  Eigen::VectorXd axis(channels);
  Eigen::MatrixXd matrix(spectra, channels);
  for (Index c = 0; c < channels; ++c) {
    const auto& row = rows[static_cast<std::size_t>(c) + 1];
    if (row.fields.size() != header.size())
      throw Error(ErrorCode::RaggedRows, "row=" + std::to_string(row.line) + " has " +
                                             std::to_string(row.fields.size()) + " fields, header has " +
                                             std::to_string(header.size()));
    for (std::size_t f = 0; f < row.fields.size(); ++f) {
      double value = 0.0;
      const std::string& column = f == 0 ? std::string(kAxisHeader) : labels[f - 1];
      if (!detail::parse_double(row.fields[f], value) || !std::isfinite(value))
        throw Error(ErrorCode::NonFiniteValue, "row=" + std::to_string(row.line) + " column=" +
                                                   column + " value='" + row.fields[f] + "'");
      if (f == 0) {
        axis[c] = value;
      } else {
        matrix(static_cast<Index>(f - 1), c) = value;
      }
    }
    if (c > 0 && !(axis[c] > axis[c - 1]))
      throw Error(ErrorCode::NonmonotonicAxis, "row=" + std::to_string(row.line) + " value=" +
                                                   format_number(axis[c]) + " after " +
                                                   format_number(axis[c - 1]));
  }
  return SpectraSet(std::move(axis), std::move(matrix), std::move(labels));
}

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.9g", value);
  return buffer;
}

void save_spectra(const std::filesystem::path& path, const SpectraSet& set) {
  std::string text(kAxisHeader);
  for (const auto& label : set.labels()) text += "," + label;
  text += '\n';
  for (Index c = 0; c < set.channels(); ++c) {
    text += format_number(set.axis()[c]);
    for (Index n = 0; n < set.rows(); ++n) {
      text += ',';
      text += format_number(set.matrix()(n, c));
    }
    text += '\n';
  }
  detail::write_text(path, text);
}

ConcentrationSet load_concentrations(const std::filesystem::path& path) {
  const auto rows = detail::read_csv(path);
  if (rows.empty()) throw Error(ErrorCode::BadHeader, "empty file " + path.string());
  const auto& header = rows.front().fields;
  if (header.front() != "species")
    throw Error(ErrorCode::BadHeader, "first column must be 'species', found '" + header.front() + "'");
  const bool has_units = header.size() > 1 && header[1] == "unit";
  const std::size_t first_value = has_units ? 2 : 1;
  if (header.size() <= first_value) throw Error(ErrorCode::BadHeader, "no sample columns");
  std::vector<std::string> labels(header.begin() + static_cast<std::ptrdiff_t>(first_value), header.end());
  require_unique(labels, "sample");

  const auto q = static_cast<Index>(rows.size() - 1);
  if (q == 0) throw Error(ErrorCode::EmptyMatrix, "no species rows in " + path.string());
  Eigen::MatrixXd matrix(q, static_cast<Index>(labels.size()));
  std::vector<std::string> species, units;
  for (Index s = 0; s < q; ++s) {
    const auto& row = rows[static_cast<std::size_t>(s) + 1];
    if (row.fields.size() != header.size())
      throw Error(ErrorCode::RaggedRows, "row=" + std::to_string(row.line) + " has " +
                                             std::to_string(row.fields.size()) + " fields, header has " +
                                             std::to_string(header.size()));
    species.push_back(row.fields[0]);
    units.push_back(has_units ? row.fields[1] : "");
    for (std::size_t f = first_value; f < row.fields.size(); ++f) {
      double value = 0.0;
      const auto& label = labels[f - first_value];
      if (!detail::parse_double(row.fields[f], value) || !std::isfinite(value))
        throw Error(ErrorCode::NonFiniteValue, "row=" + std::to_string(row.line) + " column=" + label +
                                                   " value='" + row.fields[f] + "'");
      if (value < 0.0)
        throw Error(ErrorCode::NegativeConcentration, "row=" + std::to_string(row.line) + " species=" +
                                                          species.back() + " sample=" + label +
                                                          " value=" + row.fields[f]);
      matrix(s, static_cast<Index>(f - first_value)) = value;
    }
  }
  require_unique(species, "species");
  return ConcentrationSet(std::move(matrix), std::move(species), std::move(units), std::move(labels));
}

ConcentrationSet align_to_labels(const ConcentrationSet& conc, std::span<const std::string> labels) {
  std::unordered_map<std::string, Index> position;
  for (Index c = 0; c < conc.samples(); ++c) position.emplace(conc.labels()[c], c);
  std::vector<Index> order;
  order.reserve(labels.size());
  for (const auto& label : labels) {
    const auto it = position.find(label);
    if (it == position.end())
      throw Error(ErrorCode::LabelMismatch, "spectrum '" + label + "' has no concentration column");
    order.push_back(it->second);
  }
  if (static_cast<Index>(labels.size()) != conc.samples()) {
    std::unordered_set<std::string> wanted(labels.begin(), labels.end());
    for (const auto& label : conc.labels())
      if (!wanted.contains(label))
        throw Error(ErrorCode::LabelMismatch, "concentration sample '" + label + "' has no spectrum");
  }
  return conc.select_columns(order);
}

ConcentrationSet load_concentrations(const std::filesystem::path& path, const SpectraSet& spectra) {
  return align_to_labels(load_concentrations(path), spectra.labels());
}

void save_concentrations(const std::filesystem::path& path, const ConcentrationSet& conc) {
  std::string text = "species,unit";
  for (const auto& label : conc.labels()) text += "," + label;
  text += '\n';
  for (Index s = 0; s < conc.species_count(); ++s) {
    text += conc.species()[s] + "," + conc.units()[s];
    for (Index c = 0; c < conc.samples(); ++c) text += "," + format_number(conc.matrix()(s, c));
    text += '\n';
  }
  detail::write_text(path, text);
}

void save_matrix(const std::filesystem::path& path, const Eigen::MatrixXd& matrix,
                 std::span<const std::string> headers, std::span<const std::string> row_labels) {
  if (matrix.size() == 0) throw Error(ErrorCode::EmptyMatrix, path.string());
  const bool labelled = !row_labels.empty();
  if (labelled && static_cast<Index>(row_labels.size()) != matrix.rows())
    throw Error(ErrorCode::ShapeMismatch, "row labels do not match matrix rows");
  const auto expected = static_cast<std::size_t>(matrix.cols()) + (labelled ? 1 : 0);
  if (!headers.empty() && headers.size() != expected)
    throw Error(ErrorCode::ShapeMismatch, std::to_string(headers.size()) + " headers for " +
                                              std::to_string(expected) + " columns");
  std::string text;
  for (std::size_t h = 0; h < headers.size(); ++h) text += (h ? "," : "") + headers[h];
  if (!headers.empty()) text += '\n';
  for (Index r = 0; r < matrix.rows(); ++r) {
    if (labelled) text += row_labels[static_cast<std::size_t>(r)] + ",";
    for (Index c = 0; c < matrix.cols(); ++c) {
      if (c) text += ',';
      text += format_number(matrix(r, c));
    }
    text += '\n';
  }
  detail::write_text(path, text);
}

}  // namespace ramanpcr
