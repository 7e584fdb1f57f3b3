#pragma once

// Result tables rendered as CSV or JSON with fixed float formatting.

#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

namespace kolmo::cli {

using Cell = std::variant<std::string, long long, double, bool>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add(std::vector<Cell> row);
};

enum class Format { Csv, Json };

void write_table(std::ostream& out, const Table& t, Format f);

}  // namespace kolmo::cli
