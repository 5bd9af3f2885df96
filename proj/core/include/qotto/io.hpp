// Minimal CSV and JSON file helpers with deterministic number formatting.
#pragma once

#include <nlohmann/json.hpp>

#include <string>
#include <vector>

namespace qotto::io {

// Shortest decimal string that round-trips to the same double ('.' decimal).
std::string format_number(double value);

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);

  void add_row(std::vector<std::string> cells);
  void add_numeric_row(const std::vector<double>& values);

  const std::vector<std::string>& header() const { return header_; }
  const std::vector<std::vector<std::string>>& rows() const { return rows_; }

  std::string to_string() const;
  void write(const std::string& path) const;
  static CsvTable read(const std::string& path);

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

void write_text(const std::string& path, const std::string& text);
void write_json(const std::string& path, const nlohmann::json& value);
nlohmann::json read_json(const std::string& path);

}  // namespace qotto::io
