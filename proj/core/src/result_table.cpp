#include "inac/result_table.hpp"

#include <charconv>
#include <cmath>
#include <ostream>
#include <sstream>

#include "inac/errors.hpp"

namespace inac {

void ResultTable::add_row(std::vector<Cell> row) {
  if (row.size() != columns.size())
    throw ValidationError("row has " + std::to_string(row.size()) + " cells but the table has " +
                          std::to_string(columns.size()) + " columns");
  rows.push_back(std::move(row));
}

std::size_t ResultTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i)
    if (columns[i] == name) return i;
  throw ValidationError("no column named '" + name + "'");
}

double ResultTable::number(std::size_t row, const std::string& name) const {
  const Cell& c = rows.at(row).at(column(name));
  if (const auto* d = std::get_if<double>(&c)) return *d;
  if (const auto* i = std::get_if<std::int64_t>(&c)) return static_cast<double>(*i);
  throw ValidationError("cell '" + name + "' in row " + std::to_string(row) + " is not numeric");
}

bool ResultTable::is_empty(std::size_t row, const std::string& name) const {
  return std::holds_alternative<std::monostate>(rows.at(row).at(column(name)));
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

std::string quote(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string render(const Cell& c) {
  struct Visitor {
    std::string operator()(std::monostate) const { return {}; }
    std::string operator()(std::int64_t v) const { return std::to_string(v); }
    std::string operator()(double v) const { return format_double(v); }
    std::string operator()(const std::string& v) const { return quote(v); }
  };
  return std::visit(Visitor{}, c);
}

std::string one_line(std::string s) {
  for (char& c : s)
    if (c == '\r' || c == '\n') c = ' ';
  return s;
}

}  // namespace

void write_csv(std::ostream& out, const ResultTable& table) {
  for (const auto& [k, v] : table.metadata) out << "# " << one_line(k) << ": " << one_line(v) << "\r\n";
  for (std::size_t i = 0; i < table.columns.size(); ++i) out << (i ? "," : "") << quote(table.columns[i]);
  out << "\r\n";
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << render(row[i]);
    out << "\r\n";
  }
}

std::string to_csv(const ResultTable& table) {
  std::ostringstream os;
  write_csv(os, table);
  return os.str();
}

}  // namespace inac
