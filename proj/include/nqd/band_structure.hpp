#pragma once

#include <vector>

#include "nqd/kernel_solver.hpp"

namespace nqd {

struct BandPoint {
  double k = 0.0;         // 1/nm along the transport axis
  int subband_index = 0;  // 0 = lowest
  double energy = 0.0;    // ueV, negative for bound sub-bands
};

/// Transport axis of a periodic shape: x for slabs, z for cylinders.
int transport_axis(Shape shape);

/// Uniform k from 0 to the zone edge pi/a0.
std::vector<double> default_k_samples(const GeometrySpec& spec, int count = 32);

/// Bound sub-bands E_n(k) = -e_b(n, k) from the Bloch kernel at each k.
/// Points are ordered by k, then by ascending energy.
std::vector<BandPoint> subband_dispersion(const GeometrySpec& spec,
                                          const CrystalComposition& comp,
                                          const NuclideTable& table,
                                          const std::vector<double>& k_samples,
                                          int max_subbands = 8, const SolveOptions& opt = {});

/// Nuclei of a cubic conventional cell, positions in fractions of the edge.
struct CubicCell {
  double a_nm = 0.0;
  struct Site {
    NuclideKey key;
    Vec3 frac;
  };
  std::vector<Site> sites;

  double volume_nm3() const { return a_nm * a_nm * a_nm; }
};

/// Rocksalt cell: cations on the fcc sites, anions shifted by (1/2, 0, 0).
CubicCell rocksalt_cell(const NuclideKey& cation, const NuclideKey& anion, double a_nm);

/// Rocksalt cell matching a two-species composition with four of each per cell;
/// the edge is the cube root of the cell volume. Throws InvalidArgument otherwise.
CubicCell rocksalt_cell(const CrystalComposition& comp);

/// Number of plane waves within the first `shells` nonzero shells of h^2+k^2+l^2.
int planewave_count(int shells);

/// Lowest n_bands eigenvalues (ueV, ascending) of the plane-wave Hamiltonian
/// (hbar^2/2m_n)|k+G|^2 delta + V(G-G') with the Fermi pseudopotential
/// V(G) = 4 pi (hbar^2/2m_n) sum_a Re[b_a] exp(-i G.tau_a) / Omega.
/// With check_convergence, one more shell is added and CutoffTooSmall is raised
/// when the lowest band moves by more than 1e-3 relative to max(|E|, |V(0)|).
std::vector<double> planewave_bulk_band(const CubicCell& cell, const NuclideTable& table,
                                        const Vec3& k, int g_cutoff, int n_bands = 1,
                                        bool check_convergence = true);

}  // namespace nqd
