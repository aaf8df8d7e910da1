#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace ramanpcr::detail {

struct CsvRow {
  std::size_t line = 0;  // 1-based line number in the file
  std::vector<std::string> fields;
};

/// Plain comma-separated text without quoting. Blank lines are skipped and
/// fields are whitespace-trimmed.
std::vector<CsvRow> read_csv(const std::filesystem::path& path);

/// Parses a full field as a double; returns false on trailing garbage.
bool parse_double(std::string_view text, double& out);

void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

}  // namespace ramanpcr::detail
