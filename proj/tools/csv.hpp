#pragma once

#include <fstream>
#include <string>
#include <vector>

namespace hyrad::cli {

/// Shortest-exact decimal formatting (17 significant digits), locale-free;
/// values round-trip through parsing bit-exactly.
std::string format_double(double v);

/// Plain CSV: header row, comma separator, '.' decimal, LF line endings.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& header);

  void row(const std::vector<std::string>& cells);

 private:
  std::ofstream out_;
  std::size_t columns_;
};

std::string cell(double v);
std::string cell(int v);
std::string cell(long long v);
inline std::string cell(const std::string& s) { return s; }

}  // namespace hyrad::cli
