#pragma once

#include <fstream>
#include <initializer_list>
#include <string>
#include <vector>

namespace clab {

/// Comma-separated output with a header row. Numbers use %.17g (round-trip,
/// locale-independent). Every row ends with the config hash column.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, std::vector<std::string> columns, std::string hash);

  void row(std::initializer_list<double> values);
  void row(const std::vector<double>& values);
  /// Leading string field followed by numbers (for label columns).
  void row(const std::string& label, const std::vector<double>& values);

  const std::string& path() const { return path_; }
  std::size_t rows() const { return rows_; }

 private:
  void finish_row(const std::vector<std::string>& fields);

  std::string path_;
  std::size_t width_;
  std::string hash_;
  std::ofstream out_;
  std::size_t rows_ = 0;
};

std::string format_number(double v);

}  // namespace clab
