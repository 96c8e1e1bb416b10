#include "nqd/constants.hpp"

#include <cstdio>

namespace nqd::constants {

std::string ledger() {
  struct Entry {
    const char* name;
    double value;
  };
  const Entry entries[] = {
      {"hbar_J_s", hbar_J_s},
      {"neutron_mass_kg", neutron_mass_kg},
      {"elementary_charge_C", elementary_charge_C},
      {"vacuum_permittivity_F_m", vacuum_permittivity_F_m},
      {"hbar2_over_2mn_ueV_nm2", hbar2_over_2mn},
      {"hbar_ueV_ms", hbar_ueV_ms},
      {"hbar_over_mn_nm2_per_ms", hbar_over_mn_nm2_per_ms},
      {"thermal_speed_m_s", thermal_speed_m_s},
      {"im_b_fm_per_barn", im_b_fm_per_barn},
  };
  std::string out;
  char buf[128];
  for (const auto& e : entries) {
    std::snprintf(buf, sizeof buf, "%s=%.17g\n", e.name, e.value);
    out += buf;
  }
  return out;
}

std::string ledger_hash() {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : ledger()) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace nqd::constants
