#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace nqd {

/// Query key into the nuclide table. An absent isotope selects the
/// natural-abundance row of the element.
struct NuclideKey {
  std::string symbol;
  std::optional<int> isotope;
  bool polarized = false;

  std::string to_string() const;
  friend bool operator==(const NuclideKey&, const NuclideKey&) = default;
};

/// Bound coherent scattering length of one nuclide (or natural element).
/// im_b_fm is a non-negative magnitude: b = re_b - i im_b.
struct ScatteringEntry {
  std::string symbol;
  std::optional<int> isotope;
  int atomic_number = 0;
  double abundance = 1.0;
  double re_b_fm = 0.0;
  double im_b_fm = 0.0;
  bool polarized = false;
  bool radioactive = false;

  /// 2200 m/s absorption cross-section implied by im_b, barn.
  double absorption_cross_section_barn() const;
};

/// Immutable nuclide table loaded from CSV with the header
/// symbol,isotope,Z,abundance,re_b_fm,im_b_fm,polarized,radioactive
class NuclideTable {
public:
  static NuclideTable load(const std::filesystem::path& path);
  static NuclideTable parse(std::istream& in, const std::string& source = "<stream>");

  /// Throws UnknownNuclide when no row matches and AmbiguousKey when several do.
  const ScatteringEntry& lookup(const NuclideKey& key) const;

  /// Atomic number of an element symbol, if any row carries it.
  std::optional<int> atomic_number(const std::string& symbol) const;

  const std::vector<ScatteringEntry>& entries() const { return entries_; }

private:
  std::vector<ScatteringEntry> entries_;
};

struct Species {
  NuclideKey key;
  int count = 1;  // per unit cell
};

/// Per-unit-cell contents of a bulk crystal.
struct CrystalComposition {
  std::string name;
  std::vector<Species> species;
  double cell_volume_A3 = 0.0;
  std::optional<double> mass_density_kg_m3;

  double cell_volume_nm3() const;
  /// Throws InvalidArgument on a non-positive volume or species count.
  void validate() const;
};

/// Coherent sums over one unit cell, fm.
struct CoherentSums {
  double re_fm = 0.0;
  double im_fm = 0.0;
};

/// sum_re = sum n_a Re[b_a], sum_im = sum n_a Im[b_a].
CoherentSums composition_sums(const CrystalComposition& comp, const NuclideTable& table);

/// JSON form: {"name", "species": [{"element", "isotope"?, "polarized"?, "count"}],
/// "cell_volume_A3", "mass_density_kg_m3"?}
CrystalComposition composition_from_json(const nlohmann::json& j);
nlohmann::json composition_to_json(const CrystalComposition& comp);
CrystalComposition load_composition(const std::filesystem::path& path);

}  // namespace nqd
