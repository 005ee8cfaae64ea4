#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace thermo {

using CsvRow = std::vector<std::string>;

struct CsvTable {
  CsvRow header;
  std::vector<CsvRow> rows;

  // Column index by name; FormatError when absent.
  std::size_t column(const std::string& name) const;
  std::string text() const;
};

// Shortest round-tripping text; infinities as "inf" / "-inf", NaN as "nan".
std::string format_number(double v);
// Inverse of format_number; FormatError on junk.
double parse_number(const std::string& text);

// Unquoted comma-separated text with a header row.
CsvTable parse_csv(const std::string& text);
CsvTable read_csv(const std::filesystem::path& path);
void write_csv(const std::filesystem::path& path, const CsvTable& table);

}  // namespace thermo
