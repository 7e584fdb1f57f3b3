#include "table.hpp"

#include "kolmolab/common.hpp"

#include <json.hpp>

#include <cmath>
#include <ostream>

namespace kolmo::cli {

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

std::string text(const Cell& c) {
  if (auto s = std::get_if<std::string>(&c)) return *s;
  if (auto i = std::get_if<long long>(&c)) return std::to_string(*i);
  if (auto d = std::get_if<double>(&c)) return format_bits(*d);
  return std::get<bool>(c) ? "true" : "false";
}

nlohmann::ordered_json value(const Cell& c) {
  if (auto s = std::get_if<std::string>(&c)) return *s;
  if (auto i = std::get_if<long long>(&c)) return *i;
  if (auto d = std::get_if<double>(&c)) {
    if (!std::isfinite(*d)) return format_bits(*d);
    return nlohmann::ordered_json::parse(format_bits(*d));
  }
  return std::get<bool>(c);
}

}  // namespace

void Table::add(std::vector<Cell> row) {
  if (row.size() != columns.size()) throw Error("internal", "table row width differs from header");
  rows.push_back(std::move(row));
}

void write_table(std::ostream& out, const Table& t, Format f) {
  if (f == Format::Csv) {
    for (std::size_t i = 0; i < t.columns.size(); ++i) out << (i ? "," : "") << csv_field(t.columns[i]);
    out << '\n';
    for (const auto& row : t.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_field(text(row[i]));
      out << '\n';
    }
    return;
  }
  auto arr = nlohmann::ordered_json::array();
  for (const auto& row : t.rows) {
    nlohmann::ordered_json obj;
    for (std::size_t i = 0; i < row.size(); ++i) obj[t.columns[i]] = value(row[i]);
    arr.push_back(std::move(obj));
  }
  out << arr.dump(2) << '\n';
}

}  // namespace kolmo::cli
