#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace proxres::io {

/// `digits` significant digits, locale independent ('.' separator).
/// Infinite values give an empty string, NaN gives "nan".
std::string format_number(double value, int digits);

/// Shortest text that parses back to exactly `value`.
std::string format_shortest(double value);

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> columns);

  /// Throws DomainError unless the row has one field per column.
  void add_row(std::vector<std::string> fields);

  const std::vector<std::string>& columns() const { return columns_; }
  const std::vector<std::vector<std::string>>& rows() const { return rows_; }

  /// Comma separated, '\n' line endings, header first.
  std::string render() const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<std::string>> rows_;
};

/// Writes to a temporary sibling and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace proxres::io
