#include "yousense/table.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

namespace yousense {

Table::Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}

void Table::add_row(std::vector<Cell> cells) {
  if (cells.size() != columns_.size()) {
    throw std::invalid_argument("table row has " + std::to_string(cells.size()) + " cells, expected " +
                                std::to_string(columns_.size()));
  }
  rows_.push_back(std::move(cells));
}

OutputFormat parse_output_format(std::string_view name) {
  if (name == "csv") return OutputFormat::csv;
  if (name == "json-lines" || name == "jsonl") return OutputFormat::json_lines;
  throw std::invalid_argument("unknown output format \"" + std::string(name) +
                              "\" (expected csv or json-lines)");
}

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc{}) throw std::runtime_error("format_double failed");
  return std::string(buf.data(), end);
}

std::string csv_escape(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

namespace {

std::string cell_text(const Cell& cell) {
  if (const auto* i = std::get_if<std::int64_t>(&cell)) return std::to_string(*i);
  if (const auto* d = std::get_if<double>(&cell)) return format_double(*d);
  return std::get<std::string>(cell);
}

nlohmann::ordered_json cell_json(const Cell& cell) {
  if (const auto* i = std::get_if<std::int64_t>(&cell)) return *i;
  if (const auto* d = std::get_if<double>(&cell)) {
    if (!std::isfinite(*d)) return nullptr;
    return *d;
  }
  return std::get<std::string>(cell);
}

}  // namespace

void write_table(std::ostream& out, const Table& table, OutputFormat format,
                 const OutputMetadata& metadata) {
  if (format == OutputFormat::csv) {
    for (const auto& [key, value] : metadata) out << "# " << key << '=' << value << '\n';
    for (std::size_t c = 0; c < table.columns().size(); ++c) {
      if (c) out << ',';
      out << csv_escape(table.columns()[c]);
    }
    out << '\n';
    for (const auto& row : table.rows()) {
      for (std::size_t c = 0; c < row.size(); ++c) {
        if (c) out << ',';
        out << csv_escape(cell_text(row[c]));
      }
      out << '\n';
    }
    return;
  }
  if (!metadata.empty()) {
    nlohmann::ordered_json meta = nlohmann::ordered_json::object();
    for (const auto& [key, value] : metadata) meta[key] = value;
    out << nlohmann::ordered_json{{"meta", meta}}.dump() << '\n';
  }
  for (const auto& row : table.rows()) {
    nlohmann::ordered_json record = nlohmann::ordered_json::object();
    for (std::size_t c = 0; c < row.size(); ++c) record[table.columns()[c]] = cell_json(row[c]);
    out << record.dump() << '\n';
  }
}

}  // namespace yousense
