#pragma once

#include <optional>

#include "nqd/nuclide_data.hpp"

namespace nqd {

/// Infinite-crystal ground state: the deepest binding and its absorption
/// lifetime, which bound every finite geometry of the same material.
struct BulkProperties {
  CoherentSums sums;         // fm per unit cell
  double kappa_star = 0.0;   // 1/nm
  double e_b_star = 0.0;     // ueV
  double t_star = 0.0;       // ms
  double ebt_bound = 0.0;    // ueV ms
};

/// Binding energy -2 pi hbar^2 sum_re / (m_n Omega), ueV. Requires sum_re < 0.
double bulk_binding_energy(double sum_re_fm, double cell_volume_nm3);

/// Absorption rate 4 pi hbar sum_im / (m_n Omega), 1/ms.
double bulk_absorption_rate(double sum_im_fm, double cell_volume_nm3);

/// Throws NoBoundState when sum_re >= 0 and ZeroAbsorption when sum_im == 0.
BulkProperties bulk_properties(const CrystalComposition& comp, const NuclideTable& table);

/// Free-neutron-like band of the bulk crystal, ueV:
/// (hbar^2/2m_n) (4 pi sum_re / Omega + k^2).
double dispersion(const CrystalComposition& comp, const NuclideTable& table, double k);

/// Mass fraction (percent) of neutrons filling every bound bulk state.
/// Throws MissingDensity without a mass density.
double mass_gain_percent(const CrystalComposition& comp, const NuclideTable& table);

/// Sum over the simple cubic lattice, excluding the origin, of exp(-kappa a |n|)/|n|.
///
/// With n_max given the sum is truncated to |n| <= n_max and TruncationTooSmall is
/// raised when the exponential tail bound exceeds 1e-9 of the sum. Without it the
/// sum is taken to convergence: directly when kappa a is large enough for a short
/// truncation, otherwise by Ewald splitting of the Yukawa kernel.
double cubic_lattice_sum(double a, double kappa, std::optional<int> n_max = std::nullopt);

/// Ewald-split evaluation of the same sum (exposed for cross-checks).
double cubic_lattice_sum_ewald(double kappa_a);

/// Tail bound of the truncated lattice sum beyond radius n_max.
double cubic_lattice_tail_bound(double kappa_a, int n_max);

/// Root of 1 + (re_b/a) S(kappa a) = 0 for a one-atom simple cubic crystal, 1/nm.
double cubic_lattice_kappa(double a_nm, double re_b_nm);

}  // namespace nqd
