#pragma once

#include <string>
#include <variant>
#include <vector>

// CSV emission: comma separation, header row, '.' decimal point and
// 17-significant-digit floats independent of locale.  Files are written to a
// temporary sibling and renamed, so failures never leave partial output.

namespace nldiv {

using CsvCell = std::variant<std::string, double, long long>;

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);

  void row(std::vector<CsvCell> cells);
  std::string to_string() const;
  void save(const std::string& path) const;

  static std::string format_double(double v);

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<CsvCell>> rows_;
};

} // namespace nldiv
