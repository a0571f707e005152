#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

namespace eepc::cli {

using Cell = std::variant<double, std::int64_t, std::string>;

/// Column-labelled rows written as CSV or as a JSON array of objects.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add(std::vector<Cell> row);
  void write_csv(std::ostream& out) const;
  void write_json(std::ostream& out) const;
};

/// Shortest-free, locale-independent rendering with 17 significant digits.
std::string format_double(double value);

}  // namespace eepc::cli
