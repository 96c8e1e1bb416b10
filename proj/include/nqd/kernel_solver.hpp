#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "nqd/bulk_crystal.hpp"
#include "nqd/eigensolver.hpp"
#include "nqd/geometry.hpp"

namespace nqd {

/// Per-cell coupling c = a0^3 sum_re / Omega, nm. Negative for attractive media.
struct Coupling {
  double c = 0.0;

  static Coupling from_sums(double sum_re_fm, double cell_volume_nm3, double spacing_nm);
  static Coupling from_composition(const CrystalComposition& comp, const NuclideTable& table,
                                   const Grid& grid);
};

/// One root of lambda_k(kappa) = 1 of the discrete kernel equation.
struct BoundState {
  double kappa = 0.0;  // 1/nm
  double e_b = 0.0;    // ueV, the level sits at -e_b
  Eigen::VectorXcd psi;  // sum |psi_i|^2 a0^3 = 1
  double lambda = 1.0;   // eigenvalue of -c K(kappa) at the returned kappa
  double residual = 0.0; // || psi + c K psi ||_2
  std::string label;
  int degeneracy_group = 0;
  int degeneracy = 1;
  int parity = 0;          // +1 / -1 under inversion through the shape center, 0 if undefined
  double group_split = 0;  // spread of e_b within the degeneracy group, ueV
  Vec3 bloch_k = Vec3::Zero();
  std::uint64_t grid_fingerprint = 0;
};

struct BranchSample {
  double kappa = 0.0;
  Eigen::VectorXd lambda;  // descending
};

struct BranchCurve {
  std::vector<BranchSample> samples;  // ascending kappa
};

struct SolveOptions {
  int n_samples = 64;
  double e_min_ueV = 1e-4;              // lower end of the kappa scan
  std::optional<double> kappa_hi;       // defaults to the bulk kappa* implied by the coupling
  double degeneracy_tol = 1e-2;
  int extra_branches = 4;               // branches tracked beyond max_states
  EigenOptions eigen;
};

/// Bulk decay wavevector implied by the coupling: kappa*^2 = -4 pi c / a0^3.
double kappa_star_from_coupling(const Grid& grid, const Coupling& coupling);

/// K_ij = exp(-kappa r_ij)/r_ij with K_ii = 0, summed over periodic images
/// (self images included on the diagonal). Real for bloch_k = 0.
Eigen::MatrixXd assemble_kernel(const Grid& grid, double kappa);
Eigen::MatrixXcd assemble_kernel(const Grid& grid, double kappa, const Vec3& bloch_k);

/// Largest m eigenvalues of -c K(kappa) on a descending ladder of kappa samples.
BranchCurve branch_scan(const Grid& grid, const Coupling& coupling, double kappa_lo,
                        double kappa_hi, int n_samples, int m_branches,
                        const Vec3& bloch_k = Vec3::Zero(), const EigenOptions& eigen = {});

/// All roots lambda_k(kappa) = 1 with e_b above the scan floor, sorted by
/// descending e_b and labelled. An empty result means no bound state.
std::vector<BoundState> solve_bound_states(const Grid& grid, const Coupling& coupling,
                                           int max_states,
                                           const std::optional<Vec3>& bloch_k = std::nullopt,
                                           const SolveOptions& opt = {});

/// Lifetime for a state whose whole weight sits on grid cells with the given
/// absorbing fractions: 1/T = sum_i w_i |psi_i|^2 a0^3 / t_star.
double absorption_lifetime(const Eigen::VectorXcd& psi, const Grid& grid, double t_star,
                           const Eigen::VectorXd& absorbing_fraction);

/// Fraction of the continuous probability density inside the crystal. The
/// exterior tail is integrated on the extended lattice around the shape.
double interior_probability(const BoundState& state, const Grid& grid, const Coupling& coupling);

/// Finite-size absorption lifetime t_star / P_inside, ms. Infinite without absorption.
double finite_lifetime(const BoundState& state, const Grid& grid, const Coupling& coupling,
                       double t_star);
double finite_lifetime(const BoundState& state, const Grid& grid,
                       const CrystalComposition& comp, const NuclideTable& table);

/// Continuous wavefunction psi(r) = -s c sum_i g(r - r_i) psi_i, with g the
/// (Bloch) Yukawa image sum and s the least-squares match to psi on the sites.
/// Throws EvalTooCloseToSource when a point is within a0/10 of a site or image.
Eigen::VectorXcd reconstruct_wavefunction(const BoundState& state, const Grid& grid,
                                          const Coupling& coupling,
                                          const std::vector<Vec3>& eval_points);

/// The same field on lattice sites of the grid's extended lattice. A site that
/// coincides with a grid point omits its self term, which reproduces psi there.
/// Periodic-axis indices must lie within one period of the grid.
Eigen::VectorXcd lattice_field(const BoundState& state, const Grid& grid,
                               const Coupling& coupling,
                               const std::vector<LatticeIndex>& sites);

}  // namespace nqd
