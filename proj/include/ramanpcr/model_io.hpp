#pragma once

#include <filesystem>
#include <string>

#include "ramanpcr/regress.hpp"

namespace ramanpcr {

/// JSON document holding axis, mean spectrum, loadings, coefficients,
/// concentration means, species and the pipeline name. Numbers are written
/// in shortest round-trip form, so a reloaded model predicts bit-identically.
std::string model_to_json(const PcrModel& model);
PcrModel model_from_json(const std::string& text);

void save_model(const std::filesystem::path& path, const PcrModel& model);
PcrModel load_model(const std::filesystem::path& path);

}  // namespace ramanpcr
