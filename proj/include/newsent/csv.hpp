#pragma once

#include <cstddef>
#include <filesystem>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace newsent::csv {

using Row = std::vector<std::string>;

// RFC-4180 reader: quoted fields, doubled quotes, CRLF or LF line endings,
// embedded newlines inside quotes. A UTF-8 BOM on the first line is skipped.
std::vector<Row> parse(std::istream& in);
std::vector<Row> parse(std::string_view text);

struct Table {
  Row header;
  std::vector<Row> rows;

  // Exact match first, then case- and whitespace-insensitive.
  std::optional<std::size_t> find_column(std::string_view name) const;
};

Table read_table(const std::filesystem::path& path);

std::string escape(std::string_view field);
void write_row(std::ostream& out, const Row& row);

}  // namespace newsent::csv
