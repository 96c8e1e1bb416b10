#include "nqd/screening.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

#include "nqd/bulk_crystal.hpp"

namespace nqd {

using nlohmann::json;

namespace {

CrystalRecord parse_record(const json& j) {
  if (!j.is_object()) throw InvalidArgument("record is not a JSON object");
  auto require = [&](const char* key) -> const json& {
    if (!j.contains(key)) throw InvalidArgument(std::string("missing field '") + key + "'");
    return j.at(key);
  };
  CrystalRecord r;
  r.id = require("id").get<std::string>();
  r.formula = require("formula").get<std::string>();
  r.cell_volume_A3 = require("cell_volume_A3").get<double>();
  r.is_stable = require("is_stable").get<bool>();
  if (j.contains("max_Z")) r.max_Z = j.at("max_Z").get<int>();
  const json& sp = require("species");
  if (!sp.is_array() || sp.empty()) throw InvalidArgument("'species' must be a nonempty array");
  for (const auto& s : sp) {
    RecordSpecies rs;
    rs.element = s.at("element").get<std::string>();
    if (s.contains("isotope") && !s.at("isotope").is_null()) rs.isotope = s.at("isotope").get<int>();
    rs.count = s.at("count").get<int>();
    if (rs.count < 1) throw InvalidArgument("species count must be >= 1 for " + rs.element);
    r.species.push_back(std::move(rs));
  }
  if (!(r.cell_volume_A3 > 0.0)) throw InvalidArgument("cell_volume_A3 must be positive");
  return r;
}

}  // namespace

std::vector<CrystalRecord> ingest_records(std::istream& in) {
  std::vector<CrystalRecord> records;
  std::vector<RowError> errors;
  std::string line;
  int row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      records.push_back(parse_record(json::parse(line)));
    } catch (const json::exception& e) {
      errors.push_back({row, e.what()});
    } catch (const InvalidArgument& e) {
      errors.push_back({row, e.what()});
    }
  }
  if (!errors.empty()) {
    std::ostringstream msg;
    msg << errors.size() << " malformed record(s):";
    for (const auto& e : errors) msg << "\n  row " << e.row << ": " << e.message;
    throw SchemaViolation(msg.str(), std::move(errors));
  }
  return records;
}

std::vector<CrystalRecord> ingest_records(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open dataset " + path.string());
  return ingest_records(in);
}

CrystalComposition screening_composition(const CrystalRecord& rec, const ScreenRules& rules) {
  CrystalComposition comp;
  comp.name = rec.formula;
  comp.cell_volume_A3 = rec.cell_volume_A3;
  for (const auto& s : rec.species) {
    Species sp;
    sp.key.symbol = s.element;
    sp.key.isotope = s.isotope;
    if (!sp.key.isotope) {
      const auto it = rules.isotope_overrides.find(s.element);
      if (it != rules.isotope_overrides.end()) sp.key.isotope = it->second;
    }
    sp.key.polarized = rules.polarize_hydrogen && s.element == "H" &&
                       (!sp.key.isotope || *sp.key.isotope == 1);
    sp.count = s.count;
    comp.species.push_back(std::move(sp));
  }
  return comp;
}

ScreenReport screen_materials(const std::vector<CrystalRecord>& records,
                              const NuclideTable& table, const ScreenRules& rules) {
  ScreenReport report;
  for (const auto& rec : records) {
    try {
      if (rules.drop_unstable && !rec.is_stable) {
        report.excluded.push_back({rec.id, "unstable"});
        continue;
      }
      int max_z = 0;
      if (rec.max_Z) {
        max_z = *rec.max_Z;
      } else {
        for (const auto& s : rec.species) {
          const auto z = table.atomic_number(s.element);
          if (!z) throw UnknownNuclide("unknown element " + s.element);
          max_z = std::max(max_z, *z);
        }
      }
      if (max_z > rules.max_Z) {
        report.excluded.push_back({rec.id, "contains Z = " + std::to_string(max_z) + " > " +
                                               std::to_string(rules.max_Z)});
        continue;
      }
      const CrystalComposition comp = screening_composition(rec, rules);
      bool radioactive = false;
      for (const auto& s : comp.species) radioactive |= table.lookup(s.key).radioactive;
      if (rules.drop_radioactive && radioactive) {
        report.excluded.push_back({rec.id, "radioactive species"});
        continue;
      }
      const CoherentSums sums = composition_sums(comp, table);
      if (sums.re_fm >= 0.0) {
        std::ostringstream msg;
        msg << "no bound state (sum Re b = " << sums.re_fm << " fm)";
        report.excluded.push_back({rec.id, msg.str()});
        continue;
      }
      const BulkProperties bp = bulk_properties(comp, table);
      report.results.push_back(
          {rec.id, rec.formula, sums.re_fm, sums.im_fm, bp.e_b_star, bp.t_star, bp.ebt_bound, false});
    } catch (const Error& e) {
      report.excluded.push_back({rec.id, e.what()});
    }
  }
  if (!report.results.empty()) pareto_frontier(report.results);
  return report;
}

void pareto_frontier(std::vector<ScreenResult>& results) {
  // Sweep by descending e_b_star; a point survives if no strictly deeper
  // point has a strictly longer lifetime.
  std::vector<std::size_t> order(results.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return results[a].e_b_star > results[b].e_b_star;
  });
  double best_t = -std::numeric_limits<double>::infinity();  // over strictly deeper points
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    double tie_best = best_t;
    while (j < order.size() && results[order[j]].e_b_star == results[order[i]].e_b_star) {
      auto& r = results[order[j]];
      r.pareto = !(r.t_star < best_t);
      tie_best = std::max(tie_best, r.t_star);
      ++j;
    }
    best_t = tie_best;
    i = j;
  }
}

}  // namespace nqd
