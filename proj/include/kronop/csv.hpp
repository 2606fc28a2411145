#pragma once

#include <fstream>
#include <string>
#include <variant>
#include <vector>

namespace kronop {

using CsvValue = std::variant<std::string, double, long, int>;

/// Minimal RFC-4180-style writer: header row, '.' decimal separator, doubles
/// in scientific notation with 14 significant digits.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& header);
  void row(const std::vector<CsvValue>& values);
  const std::string& path() const { return path_; }

  static std::string format(const CsvValue& value);

 private:
  std::string path_;
  std::ofstream out_;
  std::size_t columns_;
};

}  // namespace kronop
