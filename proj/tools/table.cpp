#include "table.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

#include <json.hpp>

namespace eepc::cli {

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof buffer, value, std::chars_format::general, 17);
  return std::string(buffer, result.ptr);
}

void Table::add(std::vector<Cell> row) {
  if (row.size() != columns.size()) throw std::logic_error("table: row width differs from header");
  rows.push_back(std::move(row));
}

void Table::write_csv(std::ostream& out) const {
  for (std::size_t c = 0; c < columns.size(); ++c) out << (c ? "," : "") << columns[c];
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out << ',';
      if (const auto* d = std::get_if<double>(&row[c])) {
        out << format_double(*d);
      } else if (const auto* i = std::get_if<std::int64_t>(&row[c])) {
        out << *i;
      } else {
        out << std::get<std::string>(row[c]);
      }
    }
    out << '\n';
  }
}

void Table::write_json(std::ostream& out) const {
  nlohmann::ordered_json array = nlohmann::ordered_json::array();
  for (const auto& row : rows) {
    nlohmann::ordered_json object;
    for (std::size_t c = 0; c < row.size(); ++c) {
      std::visit(
          [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>) {
              if (std::isfinite(v)) {
                object[columns[c]] = v;
              } else {
                object[columns[c]] = nullptr;
              }
            } else {
              object[columns[c]] = v;
            }
          },
          row[c]);
    }
    array.push_back(std::move(object));
  }
  out << array.dump(2) << '\n';
}

}  // namespace eepc::cli
