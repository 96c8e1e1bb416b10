#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nqd/errors.hpp"
#include "nqd/nuclide_data.hpp"

namespace nqd {

struct RecordSpecies {
  std::string element;
  std::optional<int> isotope;
  int count = 1;  // per cell
};

/// One crystal of the screening dataset.
struct CrystalRecord {
  std::string id;
  std::string formula;
  std::vector<RecordSpecies> species;
  double cell_volume_A3 = 0.0;
  bool is_stable = true;
  std::optional<int> max_Z;  // taken from the nuclide table when absent
};

/// Reads newline-delimited JSON, one record per non-blank line:
/// {"id", "formula", "species": [{"element", "isotope"?, "count"}],
///  "cell_volume_A3", "is_stable", "max_Z"?}.
/// Every malformed row is collected; any of them raises SchemaViolation.
std::vector<CrystalRecord> ingest_records(std::istream& in);
std::vector<CrystalRecord> ingest_records(const std::filesystem::path& path);

struct ScreenRules {
  int max_Z = 57;  // La
  bool drop_unstable = true;
  bool drop_radioactive = true;
  bool polarize_hydrogen = true;
  std::map<std::string, int> isotope_overrides{{"Li", 7}, {"B", 11}, {"Cl", 37}, {"Se", 80}};
};

struct ScreenResult {
  std::string id;
  std::string formula;
  double sum_re_fm = 0.0;
  double sum_im_fm = 0.0;
  double e_b_star = 0.0;  // ueV
  double t_star = 0.0;    // ms
  double ebt_bound = 0.0; // ueV ms
  bool pareto = false;
};

/// A record left out of the results, with the reason.
struct ScreenIssue {
  std::string id;
  std::string reason;
};

struct ScreenReport {
  std::vector<ScreenResult> results;  // input order, Pareto flags set
  std::vector<ScreenIssue> excluded;
};

/// Composition used for a record after the isotope and polarization rules.
CrystalComposition screening_composition(const CrystalRecord& rec, const ScreenRules& rules);

ScreenReport screen_materials(const std::vector<CrystalRecord>& records,
                              const NuclideTable& table, const ScreenRules& rules = {});

/// Sets pareto = true exactly for results that no other result beats in both
/// e_b_star and t_star strictly.
void pareto_frontier(std::vector<ScreenResult>& results);

}  // namespace nqd
