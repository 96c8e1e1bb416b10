#pragma once

#include <string>

#include "nqd/nuclide_data.hpp"

namespace nqd::test {

inline std::string data_path(const std::string& rel) { return std::string(NQD_TEST_DATA_DIR) + "/" + rel; }

inline const NuclideTable& table() {
  static const NuclideTable t = NuclideTable::load(data_path("nuclides.csv"));
  return t;
}

inline CrystalComposition material(const std::string& name) {
  return load_composition(data_path("materials/" + name + ".json"));
}

inline double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace nqd::test
