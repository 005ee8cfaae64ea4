#include "thermo/io/csv.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "thermo/core/error.hpp"
#include "thermo/io/atomic_write.hpp"

namespace thermo {

std::size_t CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return i;
  throw FormatError("csv: missing column '" + name + "'");
}

std::string CsvTable::text() const {
  std::string out;
  auto emit = [&](const CsvRow& row) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out.push_back(',');
      out += row[i];
    }
    out.push_back('\n');
  };
  emit(header);
  for (const auto& r : rows) emit(r);
  return out;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return {buf, res.ptr};
}

double parse_number(const std::string& text) {
  if (text == "inf") return INFINITY;
  if (text == "-inf") return -INFINITY;
  if (text == "nan") return NAN;
  double v = 0.0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size())
    throw FormatError("csv: '" + text + "' is not a number");
  return v;
}

CsvTable parse_csv(const std::string& text) {
  CsvTable table;
  std::istringstream in(text);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    CsvRow row;
    std::size_t start = 0;
    for (;;) {
      const std::size_t comma = line.find(',', start);
      row.push_back(line.substr(start, comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (first) {
      table.header = std::move(row);
      first = false;
    } else {
      if (row.size() != table.header.size())
        throw FormatError("csv: row has " + std::to_string(row.size()) + " fields, header has " +
                          std::to_string(table.header.size()));
      table.rows.push_back(std::move(row));
    }
  }
  if (first) throw FormatError("csv: missing header row");
  return table;
}

CsvTable read_csv(const std::filesystem::path& path) {
  try {
    return parse_csv(read_file(path));
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

void write_csv(const std::filesystem::path& path, const CsvTable& table) { write_file_atomic(path, table.text()); }

}  // namespace thermo
