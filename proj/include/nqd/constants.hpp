#pragma once

#include <cstdint>
#include <numbers>
#include <string>

// Interface units: lengths nm, energies ueV, times ms, scattering lengths fm,
// cell volumes A^3. Everything below is derived from CODATA 2018 values.
namespace nqd::constants {

inline constexpr double pi = std::numbers::pi;

inline constexpr double hbar_J_s = 1.054571817e-34;
inline constexpr double neutron_mass_kg = 1.67492749804e-27;
inline constexpr double elementary_charge_C = 1.602176634e-19;
inline constexpr double vacuum_permittivity_F_m = 8.8541878128e-12;

inline constexpr double fm_to_nm = 1e-6;
inline constexpr double A3_to_nm3 = 1e-3;
inline constexpr double ueV_to_J = 1e-6 * elementary_charge_C;

/// hbar^2 / (2 m_n) in ueV nm^2.
///
/// hbar^2/(2 m_n) = 3.3198e-42 J m^2; dividing by e gives 2.0721e-23 eV m^2,
/// and the factors 1e6 (eV -> ueV) and 1e18 (m^2 -> nm^2) bring it to
/// 20.72 ueV nm^2.
inline constexpr double hbar2_over_2mn = hbar_J_s * hbar_J_s / (2.0 * neutron_mass_kg) /
                                         elementary_charge_C * 1e6 * 1e18;

/// hbar in ueV ms (6.582e-16 eV s).
inline constexpr double hbar_ueV_ms = hbar_J_s / elementary_charge_C * 1e6 * 1e3;

/// hbar / m_n in nm^2 / ms.
inline constexpr double hbar_over_mn_nm2_per_ms = hbar_J_s / neutron_mass_kg * 1e18 * 1e-3;

/// Thermal reference speed for tabulated absorption cross-sections, m/s.
inline constexpr double thermal_speed_m_s = 2200.0;

/// Neutron wavenumber at the thermal reference speed, 1/m.
inline constexpr double thermal_wavenumber_m = neutron_mass_kg * thermal_speed_m_s / hbar_J_s;

/// Im[b] in fm per barn of 2200 m/s absorption cross-section: sigma_a k0 / (4 pi).
inline constexpr double im_b_fm_per_barn = 1e-28 * thermal_wavenumber_m / (4.0 * pi) * 1e15;

/// Binding energy (ueV) for a decay wavevector kappa (1/nm).
inline constexpr double energy_from_kappa(double kappa) {
  return hbar2_over_2mn * kappa * kappa;
}

/// Human-readable listing of every constant above, in a fixed format.
std::string ledger();

/// FNV-1a hash of ledger(), rendered as 16 hex digits.
std::string ledger_hash();

}  // namespace nqd::constants
