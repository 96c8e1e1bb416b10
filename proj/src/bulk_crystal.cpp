#include "nqd/bulk_crystal.hpp"

#include <cmath>

#include <boost/math/tools/roots.hpp>

#include "nqd/constants.hpp"
#include "nqd/errors.hpp"

namespace nqd {

using constants::pi;

double bulk_binding_energy(double sum_re_fm, double cell_volume_nm3) {
  // 2 pi hbar^2/m_n = 4 pi (hbar^2/2m_n)
  return -4.0 * pi * constants::hbar2_over_2mn * sum_re_fm * constants::fm_to_nm / cell_volume_nm3;
}

double bulk_absorption_rate(double sum_im_fm, double cell_volume_nm3) {
  return 4.0 * pi * constants::hbar_over_mn_nm2_per_ms * sum_im_fm * constants::fm_to_nm /
         cell_volume_nm3;
}

BulkProperties bulk_properties(const CrystalComposition& comp, const NuclideTable& table) {
  comp.validate();
  BulkProperties p;
  p.sums = composition_sums(comp, table);
  if (!(p.sums.re_fm < 0.0))
    throw NoBoundState("'" + comp.name + "' has non-negative coherent sum, no bound state",
                       p.sums.re_fm);
  if (p.sums.im_fm == 0.0) throw ZeroAbsorption("'" + comp.name + "' has zero absorption");
  const double omega = comp.cell_volume_nm3();
  p.e_b_star = bulk_binding_energy(p.sums.re_fm, omega);
  p.kappa_star = std::sqrt(p.e_b_star / constants::hbar2_over_2mn);
  p.t_star = 1.0 / bulk_absorption_rate(p.sums.im_fm, omega);
  p.ebt_bound = constants::hbar_ueV_ms * std::abs(p.sums.re_fm) / (2.0 * p.sums.im_fm);
  return p;
}

double dispersion(const CrystalComposition& comp, const NuclideTable& table, double k) {
  comp.validate();
  const auto sums = composition_sums(comp, table);
  if (!(sums.re_fm < 0.0))
    throw NoBoundState("'" + comp.name + "' has non-negative coherent sum, no bound band",
                       sums.re_fm);
  const double u = 4.0 * pi * sums.re_fm * constants::fm_to_nm / comp.cell_volume_nm3();
  return constants::hbar2_over_2mn * (u + k * k);
}

double mass_gain_percent(const CrystalComposition& comp, const NuclideTable& table) {
  comp.validate();
  if (!comp.mass_density_kg_m3)
    throw MissingDensity("'" + comp.name + "' has no mass density");
  const auto sums = composition_sums(comp, table);
  if (!(sums.re_fm < 0.0))
    throw NoBoundState("'" + comp.name + "' has non-negative coherent sum", sums.re_fm);
  // SI units: -sum_re / Omega in 1/m^2.
  const double density_m2 = -sums.re_fm * 1e-15 / (comp.cell_volume_A3 * 1e-30);
  return 4.0 * constants::neutron_mass_kg / (3.0 * std::sqrt(pi) * *comp.mass_density_kg_m3) *
         std::pow(density_m2, 1.5) * 100.0;
}

double cubic_lattice_tail_bound(double kappa_a, int n_max) {
  const double x = kappa_a;
  const double r = static_cast<double>(n_max);
  return 4.0 * pi * std::exp(-x * r) * (x * r + 1.0) / (x * x);
}

namespace {

double direct_lattice_sum(double x, int n_max) {
  const long long r2max = static_cast<long long>(n_max) * n_max;
  double sum = 0.0;
  for (int i = -n_max; i <= n_max; ++i)
    for (int j = -n_max; j <= n_max; ++j)
      for (int k = -n_max; k <= n_max; ++k) {
        const long long r2 = 1LL * i * i + 1LL * j * j + 1LL * k * k;
        if (r2 == 0 || r2 > r2max) continue;
        const double r = std::sqrt(static_cast<double>(r2));
        sum += std::exp(-x * r) / r;
      }
  return sum;
}

// Yukawa short-range part exp(-x r)/r - (long-range part) for splitting parameter eta.
double yukawa_short_range(double r, double x, double eta) {
  const double beta = x / (2.0 * eta);
  return 0.5 / r *
         (std::exp(-x * r) * std::erfc(eta * r - beta) + std::exp(x * r) * std::erfc(eta * r + beta));
}

}  // namespace

double cubic_lattice_sum_ewald(double x) {
  if (!(x > 0.0)) throw InvalidArgument("cubic_lattice_sum: kappa a must be positive");
  const double eta = std::max(std::sqrt(pi), 0.5 * x);
  const double beta = x / (2.0 * eta);

  const int n_real = static_cast<int>(std::ceil((6.5 + beta) / eta)) + 1;
  double real_part = 0.0;
  for (int i = -n_real; i <= n_real; ++i)
    for (int j = -n_real; j <= n_real; ++j)
      for (int k = -n_real; k <= n_real; ++k) {
        const int r2 = i * i + j * j + k * k;
        if (r2 == 0) continue;
        real_part += yukawa_short_range(std::sqrt(static_cast<double>(r2)), x, eta);
      }

  const int m_rec = static_cast<int>(std::ceil(13.0 * eta / (2.0 * pi))) + 1;
  double rec_part = 0.0;
  for (int i = -m_rec; i <= m_rec; ++i)
    for (int j = -m_rec; j <= m_rec; ++j)
      for (int k = -m_rec; k <= m_rec; ++k) {
        const double g2 = 4.0 * pi * pi * (i * i + j * j + k * k);
        rec_part += 4.0 * pi * std::exp(-(g2 + x * x) / (4.0 * eta * eta)) / (g2 + x * x);
      }

  const double lr_origin = 2.0 * eta / std::sqrt(pi) * std::exp(-beta * beta) - x * std::erfc(beta);
  return real_part + rec_part - lr_origin;
}

double cubic_lattice_sum(double a, double kappa, std::optional<int> n_max) {
  if (!(a > 0.0) || !(kappa > 0.0))
    throw InvalidArgument("cubic_lattice_sum: a and kappa must be positive");
  const double x = kappa * a;
  if (n_max) {
    if (*n_max < 1) throw InvalidArgument("cubic_lattice_sum: n_max must be >= 1");
    const double s = direct_lattice_sum(x, *n_max);
    if (cubic_lattice_tail_bound(x, *n_max) > 1e-9 * s)
      throw TruncationTooSmall("cubic_lattice_sum: tail beyond n_max = " + std::to_string(*n_max) +
                               " exceeds 1e-9 of the sum");
    return s;
  }
  // Smallest radius with exp(-x n) below 1e-12 and a tail bound below 1e-12 of 4 pi / x^2.
  int n = static_cast<int>(std::ceil(std::log(1e12) / x));
  while (cubic_lattice_tail_bound(x, n) > 1e-12 * std::max(4.0 * pi / (x * x), std::exp(-x))) ++n;
  if (n <= 40) return direct_lattice_sum(x, n);
  return cubic_lattice_sum_ewald(x);
}

double cubic_lattice_kappa(double a_nm, double re_b_nm) {
  if (!(re_b_nm < 0.0)) throw NoBoundState("cubic lattice: Re[b] must be negative", re_b_nm * 1e6);
  const double target = -a_nm / re_b_nm;
  auto f = [&](double x) { return cubic_lattice_sum_ewald(x) - target; };
  const double x0 = std::sqrt(4.0 * pi / target);
  double lo = 0.25 * x0, hi = 4.0 * x0;
  while (f(lo) < 0.0) lo *= 0.5;
  while (f(hi) > 0.0) hi *= 2.0;
  boost::math::tools::eps_tolerance<double> tol(50);
  std::uintmax_t iters = 200;
  auto [x_lo, x_hi] = boost::math::tools::toms748_solve(f, lo, hi, tol, iters);
  return 0.5 * (x_lo + x_hi) / a_nm;
}

}  // namespace nqd
