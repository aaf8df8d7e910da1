#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "ramanpcr/selector.hpp"

namespace ramanpcr {

struct InputFile {
  std::string role;  // "spectra", "concentrations"
  std::string path;
  std::string sha256;
};

/// Hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);
std::string sha256_hex(const std::string& bytes);

/// Run report as JSON. Keys keep a fixed order and no timings are included,
/// so identical inputs give identical bytes.
std::string report_to_json(const SelectionReport& report, const std::vector<InputFile>& inputs,
                           const SpectraSet& set, const ConcentrationSet& conc);

void save_report(const std::filesystem::path& path, const std::string& json);

}  // namespace ramanpcr
