#include "report.hpp"

#include <charconv>
#include <cmath>
#include <system_error>

#include <json.hpp>

#ifndef STRATINT_VERSION
#define STRATINT_VERSION "unknown"
#endif

namespace stratcli {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\r\n") == std::string::npos) return text;
  std::string quoted = "\"";
  for (char c : text) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

namespace {

std::string cell_text(const Cell& cell) {
  struct Visitor {
    std::string operator()(std::int64_t v) const { return std::to_string(v); }
    std::string operator()(double v) const { return format_double(v); }
    std::string operator()(bool v) const { return v ? "true" : "false"; }
    std::string operator()(const std::string& v) const { return v; }
  };
  return std::visit(Visitor{}, cell);
}

nlohmann::ordered_json cell_json(const Cell& cell) {
  struct Visitor {
    nlohmann::ordered_json operator()(std::int64_t v) const { return v; }
    nlohmann::ordered_json operator()(double v) const {
      if (!std::isfinite(v)) return format_double(v);
      return v;
    }
    nlohmann::ordered_json operator()(bool v) const { return v; }
    nlohmann::ordered_json operator()(const std::string& v) const { return v; }
  };
  return std::visit(Visitor{}, cell);
}

}  // namespace

void write_csv(const Report& report, std::ostream& out) {
  for (std::size_t c = 0; c < report.columns.size(); ++c) {
    if (c) out << ',';
    out << csv_field(report.columns[c]);
  }
  out << "\r\n";
  for (const auto& row : report.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out << ',';
      out << csv_field(cell_text(row[c]));
    }
    out << "\r\n";
  }
}

void write_json(const Report& report, std::ostream& out) {
  nlohmann::ordered_json doc;
  auto& meta = doc["metadata"];
  meta["seed"] = report.seed;
  meta["version"] = STRATINT_VERSION;
  meta["command"] = report.command;
  meta["flags"] = nlohmann::ordered_json::object();
  for (const auto& [name, value] : report.flags) meta["flags"][name] = value;
  doc["columns"] = report.columns;
  auto rows = nlohmann::ordered_json::array();
  for (const auto& row : report.rows) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (std::size_t c = 0; c < row.size(); ++c) obj[report.columns[c]] = cell_json(row[c]);
    rows.push_back(std::move(obj));
  }
  doc["rows"] = std::move(rows);
  out << doc.dump(2) << '\n';
}

}  // namespace stratcli
