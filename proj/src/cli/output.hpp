#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace spherevol::cli {

enum class Format { Json, Csv };

// Plot-ready rows; when present it replaces the flattened payload in CSV.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<nlohmann::json>> rows;
};

// RFC 4180: quote when the field holds a comma, quote, CR or LF; double the quotes.
std::string csv_escape(const std::string& field);

// Nested objects and arrays become dotted keys: {"a": {"b": [1, 2]}} -> a.b.0, a.b.1.
std::vector<std::pair<std::string, nlohmann::json>> flatten(const nlohmann::json& payload);

void write_json(const nlohmann::json& payload, std::ostream& out);
void write_csv(const nlohmann::json& payload, const std::optional<Table>& table,
               std::ostream& out);

}  // namespace spherevol::cli
