#include "qlocal/csv.hpp"

#include <stdexcept>

namespace qlocal {

void Table::add_row(std::vector<std::string> row) {
  if (row.size() != columns.size())
    throw std::logic_error("Table::add_row: width mismatch");
  rows.push_back(std::move(row));
}

static bool needs_quoting(const std::string& field) {
  for (char c : field)
    if (c == ',' || c == '"' || c == '\n' || c == '\r') return true;
  return false;
}

static void append_field(std::string& out, const std::string& field) {
  if (!needs_quoting(field)) {
    out += field;
    return;
  }
  out += '"';
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
}

std::string to_csv(const Table& t) {
  std::string out;
  for (std::size_t i = 0; i < t.columns.size(); ++i) {
    if (i) out += ',';
    append_field(out, t.columns[i]);
  }
  out += '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      append_field(out, row[i]);
    }
    out += '\n';
  }
  return out;
}

}  // namespace qlocal
