#include "nqd/transitions.hpp"

#include <cmath>
#include <complex>
#include <sstream>

#include "nqd/bulk_crystal.hpp"
#include "nqd/constants.hpp"
#include "nqd/errors.hpp"

namespace nqd {

using constants::pi;
using cplx = std::complex<double>;

double DriveConfig::charge_C() const {
  return 4.0 * pi * constants::vacuum_permittivity_F_m * radius_nm * 1e-9 * surface_voltage_V;
}

double DriveConfig::mass_kg() const {
  const double r = radius_nm * 1e-9;
  return 4.0 * pi / 3.0 * r * r * r * mass_density_kg_m3;
}

void DriveConfig::validate() const {
  if (!(radius_nm > 0.0)) throw InvalidArgument("drive radius must be positive");
  if (!(mass_density_kg_m3 > 0.0)) throw InvalidArgument("mass density must be positive");
  if (!(surface_voltage_V >= 0.0)) throw InvalidArgument("surface voltage must be non-negative");
  if (!(drive_freq_rad_s >= 0.0)) throw InvalidArgument("drive frequency must be non-negative");
}

std::vector<LatticeIndex> dipole_box_sites(const Grid& grid) {
  if (grid.spec.shape != Shape::sphere)
    throw InvalidArgument("dipole elements are defined for spheres");
  const double half = 1.5 * grid.spec.radius;
  const int n = static_cast<int>(std::ceil(half / grid.spacing)) + 1;
  std::vector<LatticeIndex> sites;
  for (int i = -n; i <= n; ++i)
    for (int j = -n; j <= n; ++j)
      for (int k = -n; k <= n; ++k) {
        const LatticeIndex idx{i, j, k};
        const Vec3 r = grid.lattice_point(idx) - grid.spec.center;
        if (r.cwiseAbs().maxCoeff() <= half) sites.push_back(idx);
      }
  return sites;
}

namespace {

struct BoxField {
  std::vector<Vec3> r;
  Eigen::VectorXcd f;
};

BoxField box_field(const BoundState& s, const Grid& grid, const Coupling& coupling,
                   const std::vector<LatticeIndex>& sites) {
  BoxField out;
  out.f = lattice_field(s, grid, coupling, sites);
  out.f /= std::sqrt(out.f.squaredNorm() * grid.cell_weight);
  out.r.reserve(sites.size());
  for (const auto& idx : sites) out.r.push_back(grid.lattice_point(idx) - grid.spec.center);
  return out;
}

Eigen::Vector3cd dipole(const BoxField& m, const BoxField& n, double weight) {
  Eigen::Vector3cd d = Eigen::Vector3cd::Zero();
  for (std::size_t i = 0; i < m.r.size(); ++i) {
    const auto e = static_cast<Eigen::Index>(i);
    d += std::conj(m.f[e]) * n.f[e] * m.r[i].cast<cplx>();
  }
  return d * weight;
}

void check_same_grid(const BoundState& s, const Grid& grid) {
  if (s.grid_fingerprint != grid.fingerprint())
    throw GeometryMismatch("state " + s.label + " was not computed on this grid");
}

}  // namespace

TransitionElement dipole_element(const BoundState& m, const BoundState& n, const Grid& grid,
                                 const Coupling& coupling) {
  check_same_grid(m, grid);
  check_same_grid(n, grid);
  const auto sites = dipole_box_sites(grid);
  const BoxField fm = box_field(m, grid, coupling, sites);
  const BoxField fn = box_field(n, grid, coupling, sites);
  TransitionElement t;
  t.d_nm = dipole(fm, fn, grid.cell_weight);
  t.omega_mn_rad_s = (m.e_b - n.e_b) / (constants::hbar_ueV_ms * 1e-3);
  return t;
}

BoundState align_with_field(const std::vector<BoundState>& group, const BoundState& reference,
                            const Grid& grid, const Coupling& coupling, const Vec3& direction) {
  if (group.empty()) throw InvalidArgument("empty degenerate group");
  if (!(direction.norm() > 0.0)) throw InvalidArgument("field direction must be nonzero");
  check_same_grid(reference, grid);
  const Vec3 u = direction.normalized();
  const auto sites = dipole_box_sites(grid);
  const BoxField fr = box_field(reference, grid, coupling, sites);

  BoundState out = group.front();
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(out.psi.size());
  for (const auto& g : group) {
    check_same_grid(g, grid);
    const BoxField fg = box_field(g, grid, coupling, sites);
    const cplx c = u.cast<cplx>().dot(dipole(fg, fr, grid.cell_weight));
    psi += c * g.psi;
  }
  const double nrm = std::sqrt(psi.squaredNorm() * grid.cell_weight);
  if (!(nrm > 0.0)) throw NumericalError("degenerate group has no dipole along the field");
  out.psi = psi / nrm;
  return out;
}

double rabi_frequency(const DriveConfig& drive, const TransitionElement& elem) {
  drive.validate();
  const double omega = drive.drive_freq_rad_s > 0.0 ? drive.drive_freq_rad_s
                                                    : std::abs(elem.omega_mn_rad_s);
  if (!(omega > 0.0)) throw ZeroDrive("drive frequency is zero");
  const Eigen::Vector3cd field = (drive.field_kV_cm * 1e5).cast<cplx>();  // V/m
  const cplx coupling = (elem.d_nm * 1e-9).dot(field);
  return drive.charge_C() * constants::neutron_mass_kg / (drive.mass_kg() * constants::hbar_J_s) *
         (std::abs(elem.omega_mn_rad_s) / omega) * std::abs(coupling);
}

std::vector<TwoLevelSample> simulate_two_level(double omega, double detuning, double gamma,
                                               double t_span, double dt) {
  if (!(gamma >= 0.0)) throw InvalidArgument("decay rate must be non-negative");
  if (!(t_span >= 0.0) || !(dt > 0.0)) throw InvalidArgument("time span and step must be positive");
  const double w = std::hypot(omega, detuning);
  if (w > 0.0 && dt > 2.0 * pi / (50.0 * w)) {
    std::ostringstream msg;
    msg << "time step " << dt << " s exceeds 2 pi / (50 W) = " << 2.0 * pi / (50.0 * w) << " s";
    throw StepTooCoarse(msg.str());
  }
  const auto steps = static_cast<long>(std::ceil(t_span / dt - 1e-12));
  const double h = steps > 0 ? t_span / double(steps) : 0.0;

  // exp(-i h H / hbar) = cos(wh/2) - i sin(wh/2) (Omega sx + Delta sz) / w
  const double c = std::cos(0.5 * w * h);
  const double s = w > 0.0 ? std::sin(0.5 * w * h) / w : 0.0;
  const cplx u00(c, -s * detuning), u01(0.0, -s * omega);
  const cplx u10(0.0, -s * omega), u11(c, s * detuning);

  std::vector<TwoLevelSample> out;
  out.reserve(std::size_t(steps) + 1);
  cplx a(1.0, 0.0), b(0.0, 0.0);
  for (long i = 0; i <= steps; ++i) {
    const double t = h * double(i);
    const double decay = std::exp(-gamma * t);
    out.push_back({t * 1e6, std::norm(a) * decay, std::norm(b) * decay});
    const cplx na = u00 * a + u01 * b;
    const cplx nb = u10 * a + u11 * b;
    a = na, b = nb;
  }
  return out;
}

SphereRabi sphere_rabi(const CrystalComposition& comp, const NuclideTable& table,
                       double radius_nm, int grid_div, const DriveConfig& drive,
                       const SolveOptions& opt) {
  const Grid grid = build_grid(GeometrySpec::sphere(radius_nm, grid_div));
  const Coupling coupling = Coupling::from_composition(comp, table, grid);
  const auto states = solve_bound_states(grid, coupling, 8, std::nullopt, opt);
  const BoundState* s = nullptr;
  std::vector<BoundState> p;
  for (const auto& st : states) {
    if (!s && st.label == "1s") s = &st;
    if (st.label == "1p") p.push_back(st);
  }
  if (!s || p.empty())
    throw NoBoundState("sphere of radius " + std::to_string(radius_nm) +
                           " nm hosts no 1s -> 1p pair",
                       composition_sums(comp, table).re_fm);
  DriveConfig d = drive;
  d.radius_nm = radius_nm;
  const BoundState pz = align_with_field(p, *s, grid, coupling, d.field_kV_cm);
  const TransitionElement t = dipole_element(*s, pz, grid, coupling);

  SphereRabi out;
  out.radius_nm = radius_nm;
  out.e_b_s = s->e_b;
  out.e_b_p = pz.e_b;
  out.dipole_nm = std::abs(t.d_nm.dot(d.field_kV_cm.normalized().cast<cplx>()));
  out.omega_mn_rad_s = t.omega_mn_rad_s;
  out.rabi_rad_s = rabi_frequency(d, t);
  out.lifetime_ms = finite_lifetime(*s, grid, comp, table);
  return out;
}

}  // namespace nqd
