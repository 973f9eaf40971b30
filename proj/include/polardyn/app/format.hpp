#pragma once

// Number formatting and table output shared by the CLI commands.

#include <string>
#include <vector>

#include <json.hpp>

namespace polardyn::app {

/// Shortest representation that round-trips to the same double.
/// Non-finite values print as nan, inf, -inf.
std::string format_double(double value);

/// Finite values stay numbers; nan and +-inf become the strings "nan", "inf", "-inf".
nlohmann::json json_number(double value);

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

/// Comma separated, header row, '\n' line endings.
std::string to_csv(const Table& table);
/// {"columns": [...], "rows": [[...], ...]}
nlohmann::json to_json(const Table& table);

/// Two-space indented JSON with a trailing newline.
std::string dump_json(const nlohmann::json& doc);

}  // namespace polardyn::app
