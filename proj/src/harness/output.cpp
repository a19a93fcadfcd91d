#include "planarspin/harness/output.hpp"

#include <openssl/evp.h>
#include <yaml-cpp/yaml.h>

#include <array>
#include <cmath>
#include <fstream>

#include "planarspin/error.hpp"
#include "planarspin/harness/units.hpp"
#include "planarspin/version.hpp"

namespace planarspin::harness {
namespace {

std::string csv_field(const Cell& cell) {
  if (const auto* d = std::get_if<double>(&cell)) return std::isnan(*d) ? std::string() : format_double(*d);
  if (const auto* i = std::get_if<std::int64_t>(&cell)) return std::to_string(*i);
  const auto& s = std::get<std::string>(cell);
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char ch : s) {
    if (ch == '"') quoted += '"';
    quoted += ch;
  }
  return quoted + "\"";
}

}  // namespace

void Table::add_row(std::vector<Cell> row) {
  if (row.size() != columns.size()) throw Error(ErrorKind::kValidation, "table row width does not match header");
  rows.push_back(std::move(row));
}

std::string to_csv(const Table& table) {
  std::string out;
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    if (i) out += ',';
    out += table.columns[i];
  }
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += csv_field(row[i]);
    }
    out += '\n';
  }
  return out;
}

nlohmann::json number(double x) { return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr); }

nlohmann::json to_json(const Table& table) {
  auto arr = nlohmann::json::array();
  for (const auto& row : table.rows) {
    nlohmann::json obj = nlohmann::json::object();
    for (std::size_t i = 0; i < row.size(); ++i) {
      const auto& cell = row[i];
      if (const auto* d = std::get_if<double>(&cell)) obj[table.columns[i]] = number(*d);
      else if (const auto* n = std::get_if<std::int64_t>(&cell)) obj[table.columns[i]] = *n;
      else obj[table.columns[i]] = std::get<std::string>(cell);
    }
    arr.push_back(std::move(obj));
  }
  return arr;
}

std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::kValidation, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorKind::kValidation, "failed writing " + path.string());
}

std::vector<std::string> write_table(const std::filesystem::path& dir, const std::string& stem, const Table& table,
                                     OutputFormat format) {
  std::vector<std::string> written;
  if (format != OutputFormat::kJson) {
    write_text(dir / (stem + ".csv"), to_csv(table));
    written.push_back(stem + ".csv");
  }
  if (format != OutputFormat::kCsv) {
    write_text(dir / (stem + ".json"), dump(to_json(table)));
    written.push_back(stem + ".json");
  }
  return written;
}

std::string sha256_hex(const std::string& data) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1)
    throw Error(ErrorKind::kValidation, "sha256 failed");
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 0xf];
  }
  return out;
}

nlohmann::json make_manifest(const std::string& command, const RunConfig& config, const nlohmann::json& gates,
                             const std::vector<std::string>& outputs, int exit_code) {
  const std::string canonical = to_yaml(config);
  nlohmann::json m;
  m["tool"] = "planarspin";
  m["command"] = command;
  m["versions"] = {{"planarspin", std::string(kVersion)},
                   {"compiler", std::string(kCompiler)},
                   {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                         std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                         std::to_string(NLOHMANN_JSON_VERSION_PATCH)}};
  m["config_sha256"] = sha256_hex(canonical);
  m["config"] = canonical;
  m["gates"] = gates;
  m["outputs"] = outputs;
  m["exit_code"] = exit_code;
  return m;
}

}  // namespace planarspin::harness
