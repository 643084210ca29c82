#pragma once

#include <string>
#include <vector>

namespace qlocal {

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> row);  // must match the column count
};

// RFC-4180 quoting: fields containing commas, quotes or newlines are wrapped
// in quotes with embedded quotes doubled. Rows end with '\n'.
std::string to_csv(const Table& t);

}  // namespace qlocal
