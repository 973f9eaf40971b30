#include "polardyn/app/format.hpp"

#include <array>
#include <charconv>
#include <cmath>

namespace polardyn::app {

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  std::array<char, 32> buf{};
  const auto result = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), result.ptr);
}

nlohmann::json json_number(double value) {
  if (std::isfinite(value)) return value;
  return format_double(value);
}

std::string to_csv(const Table& table) {
  std::string out;
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    if (i) out += ',';
    out += table.columns[i];
  }
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += format_double(row[i]);
    }
    out += '\n';
  }
  return out;
}

nlohmann::json to_json(const Table& table) {
  nlohmann::json doc;
  doc["columns"] = table.columns;
  doc["rows"] = nlohmann::json::array();
  for (const auto& row : table.rows) {
    nlohmann::json r = nlohmann::json::array();
    for (double v : row) r.push_back(json_number(v));
    doc["rows"].push_back(std::move(r));
  }
  return doc;
}

std::string dump_json(const nlohmann::json& doc) { return doc.dump(2) + "\n"; }

}  // namespace polardyn::app
