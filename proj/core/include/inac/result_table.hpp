#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace inac {

/// Empty cells (std::monostate) mark undefined values such as a PDoP that
/// does not exist.
using Cell = std::variant<std::monostate, std::int64_t, double, std::string>;

struct ResultTable {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  /// Emitted as "# key: value" lines before the header.
  std::vector<std::pair<std::string, std::string>> metadata;
  double wall_time_s = 0.0;  // not serialized

  void add_row(std::vector<Cell> row);
  std::size_t column(const std::string& name) const;
  double number(std::size_t row, const std::string& name) const;
  bool is_empty(std::size_t row, const std::string& name) const;
};

/// Shortest round-trip decimal representation ('.' separator).
std::string format_double(double v);

/// RFC 4180 CSV with CRLF line endings and "#"-prefixed metadata lines.
void write_csv(std::ostream& out, const ResultTable& table);
std::string to_csv(const ResultTable& table);

}  // namespace inac
