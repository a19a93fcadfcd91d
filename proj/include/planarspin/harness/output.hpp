#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "planarspin/harness/config.hpp"

namespace planarspin::harness {

using Cell = std::variant<double, std::int64_t, std::string>;

/// Column-oriented record set rendered both as CSV and as a JSON array of objects.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add_row(std::vector<Cell> row);
};

/// Header line plus one line per row; doubles in shortest round-trip form, NaN as an empty field.
std::string to_csv(const Table& table);
/// Array of objects keyed by column name; NaN and infinities become null.
nlohmann::json to_json(const Table& table);

/// JSON text with a trailing newline. Byte-stable for equal inputs.
std::string dump(const nlohmann::json& j);
/// JSON number, or null when not finite.
nlohmann::json number(double x);

void write_text(const std::filesystem::path& path, const std::string& text);

/// Writes <stem>.csv and/or <stem>.json; returns the file names written.
std::vector<std::string> write_table(const std::filesystem::path& dir, const std::string& stem, const Table& table,
                                     OutputFormat format);

std::string sha256_hex(const std::string& data);

/// Run manifest: command, versions, hash of the canonical config, gate results and outputs.
nlohmann::json make_manifest(const std::string& command, const RunConfig& config, const nlohmann::json& gates,
                             const std::vector<std::string>& outputs, int exit_code);

}  // namespace planarspin::harness
