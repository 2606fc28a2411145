#include "kronop/csv.hpp"

#include <cstdio>

#include "kronop/errors.hpp"

namespace kronop {

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& header)
    : path_(path), out_(path), columns_(header.size()) {
  if (!out_) throw ParameterError("CsvWriter: cannot open " + path);
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) out_ << ',';
    out_ << header[i];
  }
  out_ << '\n';
}

std::string CsvWriter::format(const CsvValue& value) {
  char buf[40];
  if (const auto* d = std::get_if<double>(&value)) {
    std::snprintf(buf, sizeof buf, "%.13e", *d);
    return buf;
  }
  if (const auto* l = std::get_if<long>(&value)) {
    std::snprintf(buf, sizeof buf, "%ld", *l);
    return buf;
  }
  if (const auto* i = std::get_if<int>(&value)) {
    std::snprintf(buf, sizeof buf, "%d", *i);
    return buf;
  }
  return std::get<std::string>(value);
}

void CsvWriter::row(const std::vector<CsvValue>& values) {
  if (values.size() != columns_) throw ParameterError("CsvWriter: column count mismatch");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out_ << ',';
    out_ << format(values[i]);
  }
  out_ << '\n';
  out_.flush();
}

}  // namespace kronop
