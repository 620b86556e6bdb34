#ifndef YOUSENSE_TABLE_HPP
#define YOUSENSE_TABLE_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace yousense {

using Cell = std::variant<std::int64_t, double, std::string>;

/// Column-named rows of scalar cells; the common shape of every tool output.
class Table {
public:
  explicit Table(std::vector<std::string> columns);

  void add_row(std::vector<Cell> cells);

  [[nodiscard]] const std::vector<std::string>& columns() const noexcept { return columns_; }
  [[nodiscard]] const std::vector<std::vector<Cell>>& rows() const noexcept { return rows_; }

private:
  std::vector<std::string> columns_;
  std::vector<std::vector<Cell>> rows_;
};

enum class OutputFormat { csv, json_lines };

[[nodiscard]] OutputFormat parse_output_format(std::string_view name);

/// Ordered key/value preamble (tool version, seed, config hash, ...).
using OutputMetadata = std::vector<std::pair<std::string, std::string>>;

/// CSV: `# key=value` preamble lines, a header row, then RFC-4180 quoted
/// records. JSON lines: one `{"meta":{...}}` record, then one object per
/// row keyed by column name.
void write_table(std::ostream& out, const Table& table, OutputFormat format,
                 const OutputMetadata& metadata = {});

/// Shortest decimal text that round-trips the value.
[[nodiscard]] std::string format_double(double value);

/// Quotes a CSV field when it contains a comma, quote, or line break.
[[nodiscard]] std::string csv_escape(std::string_view field);

}  // namespace yousense

#endif  // YOUSENSE_TABLE_HPP
