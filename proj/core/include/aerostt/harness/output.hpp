#pragma once

// CSV and JSON output. Every CSV starts with a "# config_hash: <hex>" comment
// line followed by a header row whose column names carry their units.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace aerostt::harness {

using Cell = std::variant<std::string, double, long long>;

std::string format_cell(const Cell& c);

class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::string& config_hash, const std::vector<std::string>& header);

  void row(const std::vector<Cell>& cells);
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  std::ofstream out_;
  std::size_t columns_;
};

/// Writes pretty JSON with a trailing newline; creates parent directories.
void write_json(const std::filesystem::path& path, const nlohmann::json& j);

}  // namespace aerostt::harness
