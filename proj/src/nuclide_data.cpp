#include "nqd/nuclide_data.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "nqd/constants.hpp"
#include "nqd/errors.hpp"

namespace nqd {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

double to_double(const std::string& s, const std::string& where) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw InputError(where + ": not a number: '" + s + "'");
  }
}

int to_int(const std::string& s, const std::string& where) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw InputError(where + ": not an integer: '" + s + "'");
  }
}

bool to_flag(const std::string& s, const std::string& where) {
  if (s == "1" || s == "true") return true;
  if (s == "0" || s == "false" || s.empty()) return false;
  throw InputError(where + ": not a boolean flag: '" + s + "'");
}

}  // namespace

std::string NuclideKey::to_string() const {
  std::string s = isotope ? std::to_string(*isotope) + symbol : symbol;
  if (polarized) s += " (polarized)";
  return s;
}

double ScatteringEntry::absorption_cross_section_barn() const {
  return im_b_fm / constants::im_b_fm_per_barn;
}

NuclideTable NuclideTable::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open nuclide table: " + path.string());
  return parse(in, path.string());
}

NuclideTable NuclideTable::parse(std::istream& in, const std::string& source) {
  static const std::vector<std::string> expected = {
      "symbol", "isotope", "Z", "abundance", "re_b_fm", "im_b_fm", "polarized", "radioactive"};

  std::string line;
  if (!std::getline(in, line)) throw InputError(source + ": empty nuclide table");
  auto header = split_csv_line(line);
  for (auto& h : header) h = trim(h);
  if (header != expected) throw InputError(source + ": unexpected nuclide table header");

  NuclideTable table;
  int row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (trim(line).empty()) continue;
    auto f = split_csv_line(line);
    const std::string where = source + ":" + std::to_string(row);
    if (f.size() != expected.size()) throw InputError(where + ": expected 8 columns");
    for (auto& x : f) x = trim(x);

    ScatteringEntry e;
    e.symbol = f[0];
    if (e.symbol.empty()) throw InputError(where + ": empty symbol");
    if (!f[1].empty()) e.isotope = to_int(f[1], where);
    e.atomic_number = to_int(f[2], where);
    e.abundance = to_double(f[3], where);
    e.re_b_fm = to_double(f[4], where);
    e.im_b_fm = to_double(f[5], where);
    e.polarized = to_flag(f[6], where);
    e.radioactive = to_flag(f[7], where);
    if (e.im_b_fm < 0.0) throw InputError(where + ": im_b_fm must be a non-negative magnitude");
    if (e.abundance < 0.0 || e.abundance > 1.0) throw InputError(where + ": abundance outside [0,1]");
    table.entries_.push_back(std::move(e));
  }
  return table;
}

const ScatteringEntry& NuclideTable::lookup(const NuclideKey& key) const {
  const ScatteringEntry* found = nullptr;
  int matches = 0;
  for (const auto& e : entries_) {
    if (e.symbol == key.symbol && e.isotope == key.isotope && e.polarized == key.polarized) {
      found = &e;
      ++matches;
    }
  }
  if (matches == 0) throw UnknownNuclide("unknown nuclide: " + key.to_string());
  if (matches > 1) throw AmbiguousKey("ambiguous nuclide key: " + key.to_string());
  return *found;
}

std::optional<int> NuclideTable::atomic_number(const std::string& symbol) const {
  for (const auto& e : entries_)
    if (e.symbol == symbol) return e.atomic_number;
  return std::nullopt;
}

double CrystalComposition::cell_volume_nm3() const { return cell_volume_A3 * constants::A3_to_nm3; }

void CrystalComposition::validate() const {
  if (!(cell_volume_A3 > 0.0))
    throw InvalidArgument("composition '" + name + "': cell volume must be positive");
  for (const auto& s : species)
    if (s.count < 1)
      throw InvalidArgument("composition '" + name + "': species count must be >= 1 for " +
                            s.key.to_string());
  if (mass_density_kg_m3 && !(*mass_density_kg_m3 > 0.0))
    throw InvalidArgument("composition '" + name + "': mass density must be positive");
}

CoherentSums composition_sums(const CrystalComposition& comp, const NuclideTable& table) {
  CoherentSums sums;
  for (const auto& s : comp.species) {
    const auto& e = table.lookup(s.key);
    sums.re_fm += s.count * e.re_b_fm;
    sums.im_fm += s.count * e.im_b_fm;
  }
  return sums;
}

CrystalComposition composition_from_json(const nlohmann::json& j) {
  CrystalComposition comp;
  try {
    comp.name = j.value("name", std::string{});
    for (const auto& s : j.at("species")) {
      Species sp;
      sp.key.symbol = s.at("element").get<std::string>();
      if (s.contains("isotope") && !s.at("isotope").is_null()) sp.key.isotope = s.at("isotope").get<int>();
      sp.key.polarized = s.value("polarized", false);
      sp.count = s.at("count").get<int>();
      comp.species.push_back(std::move(sp));
    }
    comp.cell_volume_A3 = j.at("cell_volume_A3").get<double>();
    if (j.contains("mass_density_kg_m3") && !j.at("mass_density_kg_m3").is_null())
      comp.mass_density_kg_m3 = j.at("mass_density_kg_m3").get<double>();
  } catch (const nlohmann::json::exception& ex) {
    throw InputError(std::string("malformed composition: ") + ex.what());
  }
  comp.validate();
  return comp;
}

nlohmann::json composition_to_json(const CrystalComposition& comp) {
  nlohmann::json species = nlohmann::json::array();
  for (const auto& s : comp.species) {
    nlohmann::json js = {{"element", s.key.symbol}, {"count", s.count}};
    if (s.key.isotope) js["isotope"] = *s.key.isotope;
    if (s.key.polarized) js["polarized"] = true;
    species.push_back(std::move(js));
  }
  nlohmann::json j = {
      {"name", comp.name}, {"species", std::move(species)}, {"cell_volume_A3", comp.cell_volume_A3}};
  if (comp.mass_density_kg_m3) j["mass_density_kg_m3"] = *comp.mass_density_kg_m3;
  return j;
}

CrystalComposition load_composition(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open composition file: " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& ex) {
    throw InputError(path.string() + ": " + ex.what());
  }
  return composition_from_json(j);
}

}  // namespace nqd
