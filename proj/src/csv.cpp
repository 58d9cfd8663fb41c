#include "clab/csv.hpp"

#include <cmath>
#include <cstdio>

#include "clab/error.hpp"

namespace clab {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

CsvWriter::CsvWriter(const std::string& path, std::vector<std::string> columns, std::string hash)
    : path_(path), width_(columns.size()), hash_(std::move(hash)), out_(path, std::ios::binary) {
  if (!out_) throw ArgumentError("csv: cannot open '" + path + "' for writing");
  columns.push_back("config_hash");
  for (std::size_t i = 0; i < columns.size(); ++i) out_ << (i ? "," : "") << columns[i];
  out_ << '\n';
}

void CsvWriter::finish_row(const std::vector<std::string>& fields) {
  if (fields.size() != width_)
    throw ArgumentError("csv: row width " + std::to_string(fields.size()) + " != " +
                        std::to_string(width_) + " in " + path_);
  for (const auto& f : fields) out_ << f << ',';
  out_ << hash_ << '\n';
  ++rows_;
}

void CsvWriter::row(std::initializer_list<double> values) {
  row(std::vector<double>(values));
}

void CsvWriter::row(const std::vector<double>& values) {
  std::vector<std::string> f;
  f.reserve(values.size());
  for (double v : values) f.push_back(format_number(v));
  finish_row(f);
}

void CsvWriter::row(const std::string& label, const std::vector<double>& values) {
  std::vector<std::string> f{label};
  for (double v : values) f.push_back(format_number(v));
  finish_row(f);
}

}  // namespace clab
