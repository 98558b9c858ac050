#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

namespace epfw::csv {

// Shortest round-trip decimal form (deterministic across runs and platforms).
std::string format_double(double value);
// Fixed decimals for display tables.
std::string format_fixed(double value, int decimals);

// Strict parse of a full field; throws DataError otherwise.
double parse_double(std::string_view field);
long parse_long(std::string_view field);

// Splits one line on commas. Fields are taken verbatim; the file formats in
// this project never quote or embed commas.
std::vector<std::string> split_line(std::string_view line);

std::string trim(std::string_view text);

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> row_lines;  // 1-based file line of each row

  // Header lookup; throws DataError naming the column when absent.
  std::size_t column(std::string_view name) const;
};

// Reads a whole file; requires a header row; skips blank lines; throws
// DataError (naming the line) when a row's width differs from the header's.
Table read_file(const std::filesystem::path& path);

// Line-buffered writer that always emits '\n' endings.
class Writer {
 public:
  explicit Writer(const std::filesystem::path& path);

  void row(const std::vector<std::string>& fields);

 private:
  std::ofstream out_;
  std::filesystem::path path_;
};

}  // namespace epfw::csv
