#pragma once

#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

namespace nqd {

/// Provenance written at the top of every output file.
struct RunMetadata {
  std::string subcommand;
  std::string config;  // resolved configuration, TOML
};

std::string version();

using Cell = std::variant<std::string, double, long long, bool>;

/// Column-oriented result table. An empty table with a reason is the
/// explicit "no result" answer.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  std::string empty_reason;

  void add(std::vector<Cell> row);
};

/// Doubles are written with 17 significant digits so files round-trip exactly.
std::string format_cell(const Cell& cell);

/// CSV with a '#'-prefixed metadata block, then the header row and data rows.
void write_csv(std::ostream& out, const RunMetadata& meta, const Table& table);

/// {"metadata": {...}, "columns": [...], "rows": [[...], ...], "empty"?: reason}
void write_json(std::ostream& out, const RunMetadata& meta, const Table& table);

/// {"metadata": {...}, "result": payload}
void write_json(std::ostream& out, const RunMetadata& meta, const nlohmann::json& payload);

nlohmann::json metadata_json(const RunMetadata& meta);

}  // namespace nqd
