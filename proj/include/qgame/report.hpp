#pragma once

// Rendering of numeric results as CSV (comma separated, LF line endings,
// header row) and versioned JSON documents.
//
// Every number goes through format_number(): 12 significant digits, with
// magnitudes below 1e-12 written as 0. JSON documents store the same
// rounded values, so both renderings parse back to identical doubles.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

namespace qgame {

inline constexpr const char* kReportSchema = "qgame.report/v1";

inline std::string format_number(double v) {
  if (std::abs(v) < 1e-12) v = 0.0;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

inline double rounded(double v) { return std::strtod(format_number(v).c_str(), nullptr); }

using Json = nlohmann::ordered_json;

inline Json json_number(double v) { return Json(rounded(v)); }

class CsvTable {
 public:
  using Cell = std::variant<std::string, double, long long, bool>;

  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

  void add_row(std::vector<Cell> row) {
    if (row.size() != header_.size()) throw std::invalid_argument("CSV row width differs from header");
    rows_.push_back(std::move(row));
  }

  const std::vector<std::string>& header() const { return header_; }
  std::size_t size() const { return rows_.size(); }

  std::string render() const {
    std::string out;
    append_line(out, header_);
    for (const auto& row : rows_) {
      std::vector<std::string> cells;
      cells.reserve(row.size());
      for (const auto& c : row) cells.push_back(cell_text(c));
      append_line(out, cells);
    }
    return out;
  }

 private:
  static std::string cell_text(const Cell& c) {
    if (auto s = std::get_if<std::string>(&c)) return *s;
    if (auto d = std::get_if<double>(&c)) return format_number(*d);
    if (auto i = std::get_if<long long>(&c)) return std::to_string(*i);
    return std::get<bool>(c) ? "true" : "false";
  }

  static std::string quoted(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char ch : s) {
      if (ch == '"') q += '"';
      q += ch;
    }
    return q + "\"";
  }

  static void append_line(std::string& out, const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += quoted(cells[i]);
    }
    out += '\n';
  }

  std::vector<std::string> header_;
  std::vector<std::vector<Cell>> rows_;
};

inline Json report_document(const std::string& command) {
  Json doc;
  doc["schema"] = kReportSchema;
  doc["command"] = command;
  return doc;
}

inline std::string render_json(const Json& doc) { return doc.dump(2) + "\n"; }

}  // namespace qgame
