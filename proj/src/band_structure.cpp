#include "nqd/band_structure.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "nqd/constants.hpp"
#include "nqd/errors.hpp"

namespace nqd {

using constants::pi;
using cplx = std::complex<double>;

int transport_axis(Shape shape) {
  switch (shape) {
    case Shape::slab: return 0;
    case Shape::cylinder: return 2;
    case Shape::sphere: break;
  }
  throw InvalidArgument("a sphere has no periodic axis");
}

std::vector<double> default_k_samples(const GeometrySpec& spec, int count) {
  spec.validate();
  transport_axis(spec.shape);
  if (count < 2) throw InvalidArgument("need at least two k samples");
  const double edge = pi / spec.spacing();
  std::vector<double> k(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) k[std::size_t(i)] = edge * i / (count - 1);
  return k;
}

std::vector<BandPoint> subband_dispersion(const GeometrySpec& spec,
                                          const CrystalComposition& comp,
                                          const NuclideTable& table,
                                          const std::vector<double>& k_samples,
                                          int max_subbands, const SolveOptions& opt) {
  const int axis = transport_axis(spec.shape);
  const Grid grid = build_grid(spec);
  const CoherentSums sums = composition_sums(comp, table);
  if (sums.re_fm >= 0.0)
    throw NoBoundState(comp.name + " has a non-negative coherent scattering sum", sums.re_fm);
  const Coupling coupling = Coupling::from_sums(sums.re_fm, comp.cell_volume_nm3(), grid.spacing);

  std::vector<std::vector<BandPoint>> per_k(k_samples.size());
#pragma omp parallel for schedule(dynamic)
  for (std::size_t s = 0; s < k_samples.size(); ++s) {
    Vec3 k = Vec3::Zero();
    k[axis] = k_samples[s];
    const auto states = solve_bound_states(grid, coupling, max_subbands, k, opt);
    for (std::size_t n = 0; n < states.size(); ++n)
      per_k[s].push_back({k_samples[s], static_cast<int>(n), -states[n].e_b});
  }
  std::vector<BandPoint> out;
  for (auto& v : per_k) out.insert(out.end(), v.begin(), v.end());
  return out;
}

CubicCell rocksalt_cell(const NuclideKey& cation, const NuclideKey& anion, double a_nm) {
  if (!(a_nm > 0.0)) throw InvalidArgument("lattice constant must be positive");
  CubicCell cell;
  cell.a_nm = a_nm;
  const Vec3 fcc[4] = {{0, 0, 0}, {0.5, 0.5, 0}, {0.5, 0, 0.5}, {0, 0.5, 0.5}};
  for (const auto& f : fcc) cell.sites.push_back({cation, f});
  for (const auto& f : fcc) {
    Vec3 p = f + Vec3(0.5, 0, 0);
    p = p.array() - p.array().floor();
    cell.sites.push_back({anion, p});
  }
  return cell;
}

CubicCell rocksalt_cell(const CrystalComposition& comp) {
  if (comp.species.size() != 2 || comp.species[0].count != 4 || comp.species[1].count != 4)
    throw InvalidArgument("rocksalt cell needs two species with four atoms each per cell");
  return rocksalt_cell(comp.species[0].key, comp.species[1].key, std::cbrt(comp.cell_volume_nm3()));
}

namespace {

std::vector<Eigen::Vector3i> planewaves(int shells) {
  // Distinct values of h^2+k^2+l^2, ascending, taken up to the requested shell.
  const int reach = static_cast<int>(std::ceil(std::sqrt(double(shells) + 1.0))) + 2;
  std::vector<int> norms;
  std::vector<Eigen::Vector3i> all;
  for (int h = -reach; h <= reach; ++h)
    for (int k = -reach; k <= reach; ++k)
      for (int l = -reach; l <= reach; ++l) {
        all.emplace_back(h, k, l);
        norms.push_back(h * h + k * k + l * l);
      }
  std::vector<int> distinct = norms;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  const int limit = distinct.at(std::size_t(shells));
  std::vector<Eigen::Vector3i> out;
  for (std::size_t i = 0; i < all.size(); ++i)
    if (norms[i] <= limit) out.push_back(all[i]);
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.squaredNorm() < b.squaredNorm();
  });
  return out;
}

Eigen::VectorXd planewave_levels(const CubicCell& cell, const NuclideTable& table, const Vec3& k,
                                 int shells) {
  const auto G = planewaves(shells);
  const auto n = static_cast<Eigen::Index>(G.size());
  const double a = cell.a_nm;
  const double g0 = 2.0 * pi / a;
  const double omega = cell.volume_nm3();
  const double e0 = constants::hbar2_over_2mn;

  std::vector<double> re_b;
  for (const auto& s : cell.sites) re_b.push_back(table.lookup(s.key).re_b_fm * constants::fm_to_nm);
  auto potential = [&](const Eigen::Vector3i& dG) {
    cplx sf(0.0, 0.0);
    for (std::size_t s = 0; s < cell.sites.size(); ++s) {
      const double phase = 2.0 * pi * dG.cast<double>().dot(cell.sites[s].frac);
      sf += re_b[s] * cplx(std::cos(phase), -std::sin(phase));
    }
    return 4.0 * pi * e0 * sf / omega;
  };

  Eigen::MatrixXcd H(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) H(i, j) = potential(G[i] - G[j]);
  for (Eigen::Index i = 0; i < n; ++i)
    H(i, i) += e0 * (k + g0 * G[i].cast<double>()).squaredNorm();
  if (n == 1) return H.real().diagonal();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NonConvergedEigensolve("plane-wave eigensolve did not converge");
  return es.eigenvalues();
}

}  // namespace

int planewave_count(int shells) { return static_cast<int>(planewaves(shells).size()); }

std::vector<double> planewave_bulk_band(const CubicCell& cell, const NuclideTable& table,
                                        const Vec3& k, int g_cutoff, int n_bands,
                                        bool check_convergence) {
  if (g_cutoff < 0) throw InvalidArgument("plane-wave cutoff must be non-negative");
  if (cell.sites.empty() || !(cell.a_nm > 0.0)) throw InvalidArgument("empty crystal cell");
  const Eigen::VectorXd levels = planewave_levels(cell, table, k, g_cutoff);
  if (n_bands < 1 || n_bands > levels.size())
    throw InvalidArgument("requested band count exceeds the plane-wave basis");
  if (check_convergence) {
    const double next = planewave_levels(cell, table, k, g_cutoff + 1)[0];
    // Relative to the band or the mean potential, whichever is larger, so that
    // the zero crossing of the band does not count as a change.
    double sum_re = 0.0;
    for (const auto& site : cell.sites) sum_re += table.lookup(site.key).re_b_fm * constants::fm_to_nm;
    const double v0 = 4.0 * pi * constants::hbar2_over_2mn * std::abs(sum_re) / cell.volume_nm3();
    const double change = std::abs(next - levels[0]) / std::max(std::abs(next), v0);
    if (change > 1e-3) {
      std::ostringstream msg;
      msg << "plane-wave cutoff of " << g_cutoff << " shells moves the lowest band by "
          << change << " relative when one shell is added";
      throw CutoffTooSmall(msg.str());
    }
  }
  return {levels.data(), levels.data() + n_bands};
}

}  // namespace nqd
