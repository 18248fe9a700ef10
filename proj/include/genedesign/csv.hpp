#pragma once

#include <string>
#include <vector>

namespace genedesign {

// Shortest 17-significant-digit decimal that round-trips to the same double.
std::string format_double(double v);

// Minimal CSV support: comma-separated, no quoting, header row expected.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  // Column index by name; throws Error when missing.
  std::size_t column(const std::string& name) const;
};

CsvTable parse_csv(const std::string& text);
CsvTable read_csv_file(const std::string& path);

double parse_double_field(const std::string& field, const std::string& context);

// Writes through a temp file plus rename so readers never see partial output.
void atomic_write_file(const std::string& path, const std::string& content);

std::string read_text_file(const std::string& path);

}  // namespace genedesign
