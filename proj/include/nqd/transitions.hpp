#pragma once

#include <vector>

#include <Eigen/Core>

#include "nqd/kernel_solver.hpp"

namespace nqd {

/// Microwave drive of a charged nanocrystal.
struct DriveConfig {
  Vec3 field_kV_cm = Vec3(0.0, 0.0, 1.0);
  double drive_freq_rad_s = 0.0;  // 0 selects resonance with the transition
  double surface_voltage_V = 1.0;
  double radius_nm = 0.0;
  double mass_density_kg_m3 = 0.0;

  /// Conducting-sphere charge 4 pi eps0 R V, coulomb.
  double charge_C() const;
  /// (4 pi / 3) R^3 rho, kg.
  double mass_kg() const;
  void validate() const;
};

struct TransitionElement {
  Eigen::Vector3cd d_nm = Eigen::Vector3cd::Zero();
  double omega_mn_rad_s = 0.0;  // (E_n - E_m) / hbar with E = -e_b
  int m = 0;
  int n = 0;
};

/// Sites of the solver lattice filling a cube of side 3R around a sphere.
std::vector<LatticeIndex> dipole_box_sites(const Grid& grid);

/// <m| r |n> over the 3R box on the solver lattice, each state normalized over
/// the box. Positions are relative to the sphere center.
TransitionElement dipole_element(const BoundState& m, const BoundState& n, const Grid& grid,
                                 const Coupling& coupling);

/// Combination of a degenerate group whose dipole with `reference` points
/// along `direction`: coefficients <g_j| r.u |reference>.
BoundState align_with_field(const std::vector<BoundState>& group, const BoundState& reference,
                            const Grid& grid, const Coupling& coupling, const Vec3& direction);

/// |Omega| = (q m_n / (M hbar)) (omega_mn / omega) |E0 . d_mn|, rad/s.
/// Throws ZeroDrive when omega is zero and the transition frequency is too.
double rabi_frequency(const DriveConfig& drive, const TransitionElement& elem);

struct TwoLevelSample {
  double t_us = 0.0;
  double n_s = 0.0;
  double n_p = 0.0;
};

/// Rotating-frame two-level evolution with H = (hbar/2)(Omega sx + Delta sz)
/// and uniform decay exp(-gamma t) of the total population; rates in rad/s
/// and 1/s, times in s. Starts in s. Steps are exact propagators of length
/// t_span / ceil(t_span / dt). Throws StepTooCoarse when
/// dt > 2 pi / (50 sqrt(Omega^2 + Delta^2)).
std::vector<TwoLevelSample> simulate_two_level(double omega, double detuning, double gamma,
                                               double t_span, double dt);

/// 1s -> 1p drive of a LiH-like sphere, assembled from the solver outputs.
struct SphereRabi {
  double radius_nm = 0.0;
  double e_b_s = 0.0, e_b_p = 0.0;  // ueV
  double dipole_nm = 0.0;           // |d| along the field
  double omega_mn_rad_s = 0.0;
  double rabi_rad_s = 0.0;
  double lifetime_ms = 0.0;         // finite-size lifetime of the lower state
};

/// Throws NoBoundState when the sphere hosts no 1s or no 1p level.
SphereRabi sphere_rabi(const CrystalComposition& comp, const NuclideTable& table,
                       double radius_nm, int grid_div, const DriveConfig& drive,
                       const SolveOptions& opt = {});

}  // namespace nqd
