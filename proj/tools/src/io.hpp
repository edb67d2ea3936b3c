#pragma once

#include <nlohmann/json.hpp>

#include <map>
#include <string>
#include <vector>

namespace symcount::cli {

// 12 significant digits, shortest form.
std::string fmt(double x);
// JSON number rounded to 12 significant digits (non-finite values become strings).
nlohmann::json num(double x);
nlohmann::json num_array(const std::vector<double>& xs);
// Pretty-printed JSON with every float rounded to 12 significant digits.
std::string dump_json(const nlohmann::json& j);

std::vector<double> parse_double_list(const std::string& text);
std::vector<int> parse_index_list(const std::string& text);
std::vector<std::string> split(const std::string& text, char sep);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  int column(const std::string& name) const;  // -1 when absent
  std::vector<double> numeric(int col) const;
};

CsvTable read_csv(const std::string& path);
std::string read_file(const std::string& path);

// Writes to path.tmp and renames into place so a file is either complete or absent.
void write_file_atomic(const std::string& path, const std::string& content);

std::string sha256_hex(const std::string& data);

}  // namespace symcount::cli
