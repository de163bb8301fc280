#pragma once

#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

namespace raman::cli {

using Cell = std::variant<double, long, bool, std::string>;

/// Column names carry their units, e.g. "OmegaB_rad_s".
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add(std::vector<Cell> row);
};

enum class OutputFormat { csv, json };

/// %.17g; nan/inf spelled out in CSV, null in JSON.
std::string format_number(double v);

void write_csv(std::ostream &out, const Table &t);
/// Array of objects keyed by column name.
void write_json(std::ostream &out, const Table &t);
void write_table(std::ostream &out, const Table &t, OutputFormat format);

}  // namespace raman::cli
