#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace stratcli {

using Cell = std::variant<std::int64_t, double, bool, std::string>;

// Tabular command output plus the provenance written into JSON documents.
struct Report {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  std::uint64_t seed = 0;
  std::string command;
  std::vector<std::pair<std::string, std::string>> flags;
};

// 17 significant digits with a "." decimal point; round-trips every double.
std::string format_double(double v);

// RFC 4180: fields with a comma, quote or line break are quoted, quotes doubled.
std::string csv_field(const std::string& text);

void write_csv(const Report& report, std::ostream& out);
void write_json(const Report& report, std::ostream& out);

}  // namespace stratcli
