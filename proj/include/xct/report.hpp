#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace xct {

using Cell = std::variant<std::monostate, std::int64_t, std::uint64_t, double, std::string, bool>;

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  /// A one-row summary: rendered as fields of the JSON data object.
  bool summary = false;

  void add_row(std::vector<Cell> row);
};

/// Named tables; the first is the primary CSV output.
struct Report {
  std::vector<Table> tables;
};

enum class OutputFormat { csv, json };

void write_csv(const Table& table, std::ostream& out);

/// {"meta": meta, "data": {...}}. Reals go through the same 12-significant-
/// digit rendering as CSV so both formats carry identical numbers.
nlohmann::ordered_json report_json(const Report& report, const nlohmann::ordered_json& meta);

/// CSV: primary table to `path`, every other table to "<stem>.<name>.csv"
/// beside it. JSON: one document at `path`.
std::vector<std::filesystem::path> write_report(const Report& report,
                                                const nlohmann::ordered_json& meta,
                                                const std::filesystem::path& path,
                                                OutputFormat format);

std::string csv_cell(const Cell& cell);

}  // namespace xct
