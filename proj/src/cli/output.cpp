#include "output.hpp"

#include <ostream>

namespace spherevol::cli {

namespace {

void flatten_into(const nlohmann::json& node, const std::string& prefix,
                  std::vector<std::pair<std::string, nlohmann::json>>& out) {
  if (node.is_object()) {
    for (const auto& [key, value] : node.items()) {
      flatten_into(value, prefix.empty() ? key : prefix + "." + key, out);
    }
  } else if (node.is_array()) {
    for (std::size_t i = 0; i < node.size(); ++i) {
      flatten_into(node[i], prefix + "." + std::to_string(i), out);
    }
  } else {
    out.emplace_back(prefix, node);
  }
}

std::string cell(const nlohmann::json& v) {
  if (v.is_string()) return csv_escape(v.get<std::string>());
  if (v.is_null()) return "";
  return csv_escape(v.dump());
}

void write_row(const std::vector<std::string>& cells, std::ostream& out) {
  for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
  out << "\r\n";
}

}  // namespace

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string quoted = "\"";
  for (char c : field) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

std::vector<std::pair<std::string, nlohmann::json>> flatten(const nlohmann::json& payload) {
  std::vector<std::pair<std::string, nlohmann::json>> out;
  flatten_into(payload, "", out);
  return out;
}

void write_json(const nlohmann::json& payload, std::ostream& out) {
  out << payload.dump(2) << '\n';
}

void write_csv(const nlohmann::json& payload, const std::optional<Table>& table,
               std::ostream& out) {
  if (table) {
    std::vector<std::string> header;
    for (const auto& c : table->columns) header.push_back(csv_escape(c));
    write_row(header, out);
    for (const auto& row : table->rows) {
      std::vector<std::string> cells;
      for (const auto& v : row) cells.push_back(cell(v));
      write_row(cells, out);
    }
    return;
  }
  std::vector<std::string> header, values;
  for (const auto& [key, value] : flatten(payload)) {
    header.push_back(csv_escape(key));
    values.push_back(cell(value));
  }
  write_row(header, out);
  write_row(values, out);
}

}  // namespace spherevol::cli
