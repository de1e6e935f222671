#include "xct/report.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "xct/units.hpp"

namespace xct {

namespace {

std::string quote_if_needed(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

nlohmann::ordered_json cell_json(const Cell& cell) {
  return std::visit(
      [](const auto& v) -> nlohmann::ordered_json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return nullptr;
        } else if constexpr (std::is_same_v<T, double>) {
          if (!std::isfinite(v)) return nullptr;
          return std::strtod(format_real(v).c_str(), nullptr);
        } else {
          return v;
        }
      },
      cell);
}

void write_file(const std::filesystem::path& path, const std::string& body) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out{path, std::ios::binary | std::ios::trunc};
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << body;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace

void Table::add_row(std::vector<Cell> row) {
  if (row.size() != columns.size()) throw std::logic_error("row width differs from header in " + name);
  rows.push_back(std::move(row));
}

std::string csv_cell(const Cell& cell) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return "";
        } else if constexpr (std::is_same_v<T, double>) {
          return std::isfinite(v) ? format_real(v) : "";
        } else if constexpr (std::is_same_v<T, std::string>) {
          return quote_if_needed(v);
        } else if constexpr (std::is_same_v<T, bool>) {
          return v ? "true" : "false";
        } else {
          return std::to_string(v);
        }
      },
      cell);
}

void write_csv(const Table& table, std::ostream& out) {
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    if (i) out << ',';
    out << quote_if_needed(table.columns[i]);
  }
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      out << csv_cell(row[i]);
    }
    out << '\n';
  }
}

nlohmann::ordered_json report_json(const Report& report, const nlohmann::ordered_json& meta) {
  nlohmann::ordered_json data = nlohmann::ordered_json::object();
  for (const auto& table : report.tables) {
    if (table.summary) {
      for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) data[table.columns[i]] = cell_json(row[i]);
      }
      continue;
    }
    auto rows = nlohmann::ordered_json::array();
    for (const auto& row : table.rows) {
      nlohmann::ordered_json obj = nlohmann::ordered_json::object();
      for (std::size_t i = 0; i < row.size(); ++i) obj[table.columns[i]] = cell_json(row[i]);
      rows.push_back(std::move(obj));
    }
    data[table.name] = std::move(rows);
  }
  nlohmann::ordered_json doc;
  doc["meta"] = meta;
  doc["data"] = std::move(data);
  return doc;
}

std::vector<std::filesystem::path> write_report(const Report& report,
                                                const nlohmann::ordered_json& meta,
                                                const std::filesystem::path& path,
                                                OutputFormat format) {
  std::vector<std::filesystem::path> written;
  if (format == OutputFormat::json) {
    write_file(path, report_json(report, meta).dump(2) + "\n");
    written.push_back(path);
    return written;
  }
  for (std::size_t i = 0; i < report.tables.size(); ++i) {
    std::filesystem::path target = path;
    if (i > 0) {
      target = path.parent_path() /
               (path.stem().string() + "." + report.tables[i].name + ".csv");
    }
    std::ostringstream body;
    write_csv(report.tables[i], body);
    write_file(target, body.str());
    written.push_back(target);
  }
  return written;
}

}  // namespace xct
