#pragma once

// Plain result tables rendered as CSV or JSON with fixed 12-significant-digit
// numbers, so identical inputs give byte-identical output.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "cwkb/errors.hpp"

namespace cwkb {

/// Empty cells (monostate) mark values that do not exist for a row.
using Cell = std::variant<std::monostate, std::int64_t, double, bool, std::string>;

inline std::string format_number(double v) {
  if (!std::isfinite(v)) throw Error("refusing to emit a non-finite number");
  if (v == 0.0) return "0";  // also folds -0
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

class Table {
 public:
  explicit Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}

  void add_row(std::vector<Cell> row) {
    if (row.size() != columns_.size()) throw Error("row width does not match table header");
    rows_.push_back(std::move(row));
  }

  const std::vector<std::string>& columns() const noexcept { return columns_; }
  const std::vector<std::vector<Cell>>& rows() const noexcept { return rows_; }

  std::size_t column(const std::string& name) const {
    for (std::size_t i = 0; i < columns_.size(); ++i) {
      if (columns_[i] == name) return i;
    }
    throw Error("no column named " + name);
  }

  std::string to_csv() const {
    std::ostringstream out;
    for (std::size_t i = 0; i < columns_.size(); ++i) out << (i ? "," : "") << columns_[i];
    out << '\n';
    for (const auto& row : rows_) {
      for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << render(row[i], false);
      out << '\n';
    }
    return out.str();
  }

  /// Array of objects keyed by column name, one object per line.
  std::string to_json() const {
    std::ostringstream out;
    out << "[\n";
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      out << "  {";
      for (std::size_t i = 0; i < columns_.size(); ++i) {
        out << (i ? ", " : "") << '"' << columns_[i] << "\": " << render(rows_[r][i], true);
      }
      out << (r + 1 < rows_.size() ? "},\n" : "}\n");
    }
    out << "]\n";
    return out.str();
  }

  std::string render(const std::string& format) const {
    if (format == "csv") return to_csv();
    if (format == "json") return to_json();
    throw Error("unknown output format " + format);
  }

 private:
  static std::string render(const Cell& cell, bool json) {
    return std::visit(
        [json](const auto& v) -> std::string {
          using V = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<V, std::monostate>) {
            return json ? "null" : "";
          } else if constexpr (std::is_same_v<V, std::int64_t>) {
            return std::to_string(v);
          } else if constexpr (std::is_same_v<V, double>) {
            return format_number(v);
          } else if constexpr (std::is_same_v<V, bool>) {
            return v ? "true" : "false";
          } else {
            return json ? '"' + v + '"' : v;
          }
        },
        cell);
  }

  std::vector<std::string> columns_;
  std::vector<std::vector<Cell>> rows_;
};

}  // namespace cwkb
