#include "nqd/output.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

#include "nqd/constants.hpp"
#include "nqd/errors.hpp"

namespace nqd {

using nlohmann::json;

std::string version() { return NQD_VERSION; }

void Table::add(std::vector<Cell> row) {
  if (row.size() != columns.size()) throw InvalidArgument("table row width mismatch");
  rows.push_back(std::move(row));
}

std::string format_cell(const Cell& cell) {
  struct Visitor {
    std::string operator()(const std::string& s) const {
      if (s.find_first_of(",\"\n") == std::string::npos) return s;
      std::string q = "\"";
      for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
      return q + "\"";
    }
    std::string operator()(double v) const {
      if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
      if (std::isnan(v)) return "nan";
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", v);
      return buf;
    }
    std::string operator()(long long v) const { return std::to_string(v); }
    std::string operator()(bool v) const { return v ? "true" : "false"; }
  };
  return std::visit(Visitor{}, cell);
}

json metadata_json(const RunMetadata& meta) {
  return {{"program", "nqd"},
          {"version", version()},
          {"constants_ledger_hash", constants::ledger_hash()},
          {"subcommand", meta.subcommand},
          {"config", meta.config}};
}

void write_csv(std::ostream& out, const RunMetadata& meta, const Table& table) {
  out << "# nqd " << version() << "\n";
  out << "# constants_ledger_hash " << constants::ledger_hash() << "\n";
  out << "# subcommand " << meta.subcommand << "\n";
  out << "# config begin\n";
  std::istringstream cfg(meta.config);
  for (std::string line; std::getline(cfg, line);)
    if (!line.empty()) out << "#   " << line << "\n";
  out << "# config end\n";
  if (table.rows.empty() && !table.empty_reason.empty())
    out << "# result empty: " << table.empty_reason << "\n";
  for (std::size_t i = 0; i < table.columns.size(); ++i)
    out << (i ? "," : "") << table.columns[i];
  out << "\n";
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_cell(row[i]);
    out << "\n";
  }
}

namespace {

json cell_json(const Cell& c) {
  return std::visit(
      [](const auto& v) -> json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, double>) {
          if (!std::isfinite(v)) return format_cell(v);
        }
        return v;
      },
      c);
}

}  // namespace

void write_json(std::ostream& out, const RunMetadata& meta, const Table& table) {
  json j;
  j["metadata"] = metadata_json(meta);
  j["columns"] = table.columns;
  j["rows"] = json::array();
  for (const auto& row : table.rows) {
    json r = json::array();
    for (const auto& c : row) r.push_back(cell_json(c));
    j["rows"].push_back(std::move(r));
  }
  if (table.rows.empty() && !table.empty_reason.empty()) j["empty"] = table.empty_reason;
  out << j.dump(2) << "\n";
}

void write_json(std::ostream& out, const RunMetadata& meta, const json& payload) {
  json j;
  j["metadata"] = metadata_json(meta);
  j["result"] = payload;
  out << j.dump(2) << "\n";
}

}  // namespace nqd
