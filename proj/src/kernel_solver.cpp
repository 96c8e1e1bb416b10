#include "nqd/kernel_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <unordered_map>

#include <boost/math/tools/roots.hpp>

#include "nqd/constants.hpp"
#include "nqd/errors.hpp"
#include "nqd/image_sum.hpp"

namespace nqd {

using constants::pi;
using cplx = std::complex<double>;

Coupling Coupling::from_sums(double sum_re_fm, double cell_volume_nm3, double spacing_nm) {
  if (!(cell_volume_nm3 > 0.0)) throw InvalidArgument("cell volume must be positive");
  if (!(spacing_nm > 0.0)) throw InvalidArgument("grid spacing must be positive");
  return {spacing_nm * spacing_nm * spacing_nm * sum_re_fm * constants::fm_to_nm /
          cell_volume_nm3};
}

Coupling Coupling::from_composition(const CrystalComposition& comp, const NuclideTable& table,
                                    const Grid& grid) {
  const CoherentSums sums = composition_sums(comp, table);
  return from_sums(sums.re_fm, comp.cell_volume_nm3(), grid.spacing);
}

double kappa_star_from_coupling(const Grid& grid, const Coupling& coupling) {
  if (!(coupling.c < 0.0)) throw NoBoundState("coupling is not attractive", coupling.c);
  return std::sqrt(-4.0 * pi * coupling.c / grid.cell_weight);
}

namespace {

template <class T>
T from_complex(cplx z) {
  if constexpr (std::is_same_v<T, double>) {
    return z.real();
  } else {
    return z;
  }
}

double conj_of(double x) { return x; }
cplx conj_of(cplx z) { return std::conj(z); }

// Kernel values on a box of integer lattice differences. Sites sharing the
// grid's offset differ by integer multiples of a0, so every kernel entry and
// every extended-lattice field value is a lookup into this table.
template <class Scalar>
class DifferenceTable {
public:
  DifferenceTable(const Grid& grid, double kappa, const Vec3& bloch_k,
                  const std::array<int, 3>& lo, const std::array<int, 3>& hi)
      : lo_(lo) {
    for (int a = 0; a < 3; ++a) len_[a] = hi[a] - lo[a] + 1;
    stride_ = {len_[1] * len_[2], len_[2], 1};
    data_.resize(static_cast<std::size_t>(len_[0]) * len_[1] * len_[2]);
    const YukawaImageSum g(grid.periodic_axes, kappa, bloch_k);
    const double a0 = grid.spacing;
    const bool symmetric = !grid.is_periodic();
#pragma omp parallel for schedule(static)
    for (int i = 0; i < len_[0]; ++i)
      for (int j = 0; j < len_[1]; ++j)
        for (int k = 0; k < len_[2]; ++k) {
          const int d[3] = {lo[0] + i, lo[1] + j, lo[2] + k};
          Scalar v;
          if (symmetric) {
            const double r = a0 * std::sqrt(double(d[0]) * d[0] + double(d[1]) * d[1] +
                                            double(d[2]) * d[2]);
            v = r > 0.0 ? Scalar(std::exp(-kappa * r) / r) : Scalar(0.0);
          } else {
            v = from_complex<Scalar>(g(a0 * Vec3(d[0], d[1], d[2])));
          }
          data_[static_cast<std::size_t>(i) * stride_[0] + j * stride_[1] + k] = v;
        }
    // On a box symmetric about the origin, impose g(-d) = conj(g(d)) exactly so
    // that assembled kernels are Hermitian to the last bit.
    if (lo[0] == -hi[0] && lo[1] == -hi[1] && lo[2] == -hi[2]) {
      const std::size_t n = data_.size();
      for (std::size_t e = 0; e < n / 2; ++e) data_[n - 1 - e] = conj_of(data_[e]);
      data_[n / 2] = Scalar(std::real(data_[n / 2]));
    }
  }

  // Linear offset of a difference vector relative to the table origin.
  std::ptrdiff_t linear(const LatticeIndex& d) const {
    return std::ptrdiff_t(d[0] - lo_[0]) * stride_[0] + std::ptrdiff_t(d[1] - lo_[1]) * stride_[1] +
           (d[2] - lo_[2]);
  }
  std::ptrdiff_t stride_dot(const LatticeIndex& d) const {
    return std::ptrdiff_t(d[0]) * stride_[0] + std::ptrdiff_t(d[1]) * stride_[1] + d[2];
  }
  const Scalar* data() const { return data_.data(); }

private:
  std::array<int, 3> lo_, len_{};
  std::array<std::ptrdiff_t, 3> stride_{};
  std::vector<Scalar> data_;
};

std::pair<LatticeIndex, LatticeIndex> index_bounds(const std::vector<LatticeIndex>& idx) {
  LatticeIndex lo = idx.front(), hi = idx.front();
  for (const auto& v : idx)
    for (int a = 0; a < 3; ++a) lo[a] = std::min(lo[a], v[a]), hi[a] = std::max(hi[a], v[a]);
  return {lo, hi};
}

// Field sum_j T(site - src_j) x_j for each site.
template <class Scalar>
Eigen::VectorXcd convolve_sites(const Grid& grid, double kappa, const Vec3& bloch_k,
                                const Eigen::VectorXcd& x, const std::vector<LatticeIndex>& sites) {
  Eigen::VectorXcd out(static_cast<Eigen::Index>(sites.size()));
  if (sites.empty()) return out;
  const auto [slo, shi] = index_bounds(grid.index);
  const auto [elo, ehi] = index_bounds(sites);
  std::array<int, 3> lo, hi;
  for (int a = 0; a < 3; ++a) lo[a] = elo[a] - shi[a], hi[a] = ehi[a] - slo[a];
  const DifferenceTable<Scalar> table(grid, kappa, bloch_k, lo, hi);

  const std::size_t n = grid.size();
  std::vector<std::ptrdiff_t> src(n);
  for (std::size_t j = 0; j < n; ++j) src[j] = table.stride_dot(grid.index[j]);
  const Scalar* t = table.data();
  const auto count = static_cast<std::ptrdiff_t>(sites.size());
#pragma omp parallel for schedule(static, 256)
  for (std::ptrdiff_t s = 0; s < count; ++s) {
    const Scalar* base = t + table.linear(sites[s]);
    cplx acc(0.0, 0.0);
    for (std::size_t j = 0; j < n; ++j) acc += base[-src[j]] * x[static_cast<Eigen::Index>(j)];
    out[s] = acc;
  }
  return out;
}

template <class Scalar>
MatrixX<Scalar> assemble(const Grid& grid, double kappa, const Vec3& bloch_k) {
  if (!(kappa > 0.0)) {
    if (grid.is_periodic()) throw UnboundedImageSet("periodic kernel needs kappa > 0");
    throw InvalidArgument("kernel needs kappa > 0");
  }
  const auto [lo, hi] = index_bounds(grid.index);
  std::array<int, 3> dlo, dhi;
  for (int a = 0; a < 3; ++a) dlo[a] = lo[a] - hi[a], dhi[a] = hi[a] - lo[a];
  const DifferenceTable<Scalar> table(grid, kappa, bloch_k, dlo, dhi);
  const auto n = static_cast<Eigen::Index>(grid.size());
  std::vector<std::ptrdiff_t> off(static_cast<std::size_t>(n));
  for (Eigen::Index j = 0; j < n; ++j) off[j] = table.stride_dot(grid.index[j]);
  const std::ptrdiff_t zero = table.linear({0, 0, 0});
  const Scalar* t = table.data() + zero;
  MatrixX<Scalar> K(n, n);
  // Column-major: fill column j with K(i, j) = g(r_i - r_j).
#pragma omp parallel for schedule(static)
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) K(i, j) = t[off[i] - off[j]];
  return K;
}

bool is_zero(const Vec3& k) { return k.squaredNorm() == 0.0; }

void check_bloch(const Grid& grid, const Vec3& k) {
  for (int a = 0; a < 3; ++a)
    if (k[a] != 0.0 && !grid.is_periodic_axis(a))
      throw InvalidArgument("Bloch wavevector has a component along a confined axis");
}

// Inversion through the shape center, as a permutation of grid points.
// Returns an empty map when the grid is not inversion symmetric.
std::vector<Eigen::Index> inversion_map(const Grid& grid) {
  std::map<LatticeIndex, Eigen::Index> where;
  for (std::size_t i = 0; i < grid.size(); ++i) where[grid.index[i]] = Eigen::Index(i);
  std::vector<Eigen::Index> map(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    LatticeIndex inv;
    for (int a = 0; a < 3; ++a) {
      const int v = grid.index[i][a];
      if (grid.is_periodic_axis(a)) {
        int layers = 1;
        for (const auto& p : grid.periodic_axes)
          if (p.axis == a) layers = static_cast<int>(std::lround(p.period / grid.spacing));
        inv[a] = ((-v) % layers + layers) % layers;
      } else {
        inv[a] = -v - static_cast<int>(std::lround(2.0 * grid.offset[a]));
      }
    }
    const auto it = where.find(inv);
    if (it == where.end()) return {};
    map[i] = it->second;
  }
  return map;
}

template <class Scalar>
class Engine {
public:
  Engine(const Grid& grid, const Coupling& coupling, const Vec3& k, const EigenOptions& eigen)
      : grid_(grid), c_(coupling.c), k_(k), eigen_(eigen) {}

  MatrixX<Scalar> op(double kappa) const {
    MatrixX<Scalar> K = assemble<Scalar>(grid_, kappa, k_);
    K *= -c_;
    return K;
  }

  const EigenPairs<Scalar>& eig(double kappa, int m) {
    auto it = cache_.find(kappa);
    if (it != cache_.end() && it->second.values.size() >= m) return it->second;
    auto res = top_eigenpairs<Scalar>(op(kappa), m, eigen_);
    return cache_[kappa] = std::move(res);
  }

  Eigen::VectorXd lambdas(double kappa, int m) { return eig(kappa, m).values.head(m); }

private:
  const Grid& grid_;
  double c_;
  Vec3 k_;
  EigenOptions eigen_;
  std::map<double, EigenPairs<Scalar>> cache_;
};

template <class Scalar>
BranchCurve scan(Engine<Scalar>& engine, double kappa_lo, double kappa_hi, int n_samples, int m) {
  BranchCurve curve;
  curve.samples.reserve(static_cast<std::size_t>(n_samples));
  const double r = std::log(kappa_hi / kappa_lo);
  for (int s = 0; s < n_samples; ++s) {
    const double kappa =
        s == n_samples - 1 ? kappa_hi : kappa_lo * std::exp(r * s / (n_samples - 1));
    curve.samples.push_back({kappa, engine.lambdas(kappa, m)});
  }
  return curve;
}

struct Root {
  double kappa;
  int branch;
};

template <class Scalar>
std::vector<BoundState> solve(const Grid& grid, const Coupling& coupling, int max_states,
                              const Vec3& k, const SolveOptions& opt) {
  std::vector<BoundState> states;
  if (max_states < 1) return states;
  const auto n = static_cast<int>(grid.size());
  Engine<Scalar> engine(grid, coupling, k, opt.eigen);

  double kappa_hi = opt.kappa_hi.value_or(kappa_star_from_coupling(grid, coupling));
  const double kappa_lo = std::sqrt(opt.e_min_ueV / constants::hbar2_over_2mn);
  if (!(kappa_lo < kappa_hi)) return states;

  const int m_max = std::min(n, max_states + opt.extra_branches);
  const Eigen::VectorXd top = engine.lambdas(kappa_lo, m_max);
  int m = 0;
  while (m < m_max && top[m] > 1.0) ++m;
  if (m == 0) return states;
  for (int guard = 0; engine.lambdas(kappa_hi, m)[0] >= 1.0; ++guard) {
    if (guard == 40) throw NumericalError("no kappa upper bracket for the top branch");
    kappa_hi *= 1.25;
  }

  const BranchCurve curve = scan(engine, kappa_lo, kappa_hi, opt.n_samples, m);

  std::vector<Root> roots;
  for (int b = 0; b < m; ++b) {
    for (std::size_t s = 0; s + 1 < curve.samples.size(); ++s) {
      const double fa = curve.samples[s].lambda[b] - 1.0;
      const double fb = curve.samples[s + 1].lambda[b] - 1.0;
      if ((fa > 0.0) == (fb > 0.0)) continue;
      const double ka = curve.samples[s].kappa, kb = curve.samples[s + 1].kappa;
      // Exactly degenerate with the previous branch: share its root.
      if (!roots.empty() && roots.back().branch == b - 1) {
        const double ga = curve.samples[s].lambda[b - 1] - 1.0;
        const double gb = curve.samples[s + 1].lambda[b - 1] - 1.0;
        if (std::abs(ga - fa) <= 1e-10 && std::abs(gb - fb) <= 1e-10 &&
            roots.back().kappa >= ka && roots.back().kappa <= kb) {
          roots.push_back({roots.back().kappa, b});
          continue;
        }
      }
      double kappa;
      if (fa == 0.0) {
        kappa = ka;
      } else if (fb == 0.0) {
        kappa = kb;
      } else {
        auto f = [&](double x) { return engine.lambdas(x, m)[b] - 1.0; };
        boost::uintmax_t iters = 100;
        auto tol = [](double x, double y) { return std::abs(y - x) <= 1e-11 * std::abs(y); };
        const auto [x0, x1] =
            boost::math::tools::toms748_solve(f, ka, kb, fa, fb, tol, iters);
        kappa = std::abs(f(x0)) <= std::abs(f(x1)) ? x0 : x1;
      }
      roots.push_back({kappa, b});
    }
  }

  const double a3 = grid.cell_weight;
  const std::vector<Eigen::Index> inv = is_zero(k) ? inversion_map(grid) : std::vector<Eigen::Index>{};
  for (const Root& root : roots) {
    const EigenPairs<Scalar>& ep = engine.eig(root.kappa, m);
    Eigen::VectorXcd v = ep.vectors.col(root.branch).template cast<cplx>();
    Eigen::Index imax = 0;
    v.cwiseAbs().maxCoeff(&imax);
    v *= std::conj(v[imax]) / std::abs(v[imax]);
    v /= v.norm() * std::sqrt(a3);

    BoundState st;
    st.kappa = root.kappa;
    st.e_b = constants::energy_from_kappa(root.kappa);
    st.lambda = ep.values[root.branch];
    const MatrixX<Scalar> M = engine.op(root.kappa);
    st.residual = (v - M.template cast<cplx>() * v).norm();
    st.psi = std::move(v);
    st.bloch_k = k;
    st.grid_fingerprint = grid.fingerprint();
    if (!inv.empty()) {
      cplx overlap(0.0, 0.0);
      for (Eigen::Index i = 0; i < st.psi.size(); ++i)
        overlap += std::conj(st.psi[i]) * st.psi[inv[static_cast<std::size_t>(i)]];
      st.parity = overlap.real() * a3 >= 0.0 ? 1 : -1;
    }
    states.push_back(std::move(st));
  }
  std::stable_sort(states.begin(), states.end(),
                   [](const BoundState& a, const BoundState& b) { return a.e_b > b.e_b; });
  return states;
}

void label_states(std::vector<BoundState>& states, const Grid& grid, double tol) {
  std::size_t g0 = 0;
  int group = 0;
  std::map<std::pair<std::string, int>, int> seen;
  while (g0 < states.size()) {
    std::size_t g1 = g0 + 1;
    while (g1 < states.size() &&
           std::abs(states[g0].e_b - states[g1].e_b) < tol * states[g0].e_b)
      ++g1;
    const int dim = static_cast<int>(g1 - g0);
    int parity_sum = 0;
    for (std::size_t i = g0; i < g1; ++i) parity_sum += states[i].parity;
    std::string letter;
    if (grid.spec.shape == Shape::sphere && parity_sum != 0) {
      const bool even = parity_sum > 0;
      if (dim == 1) letter = even ? "s" : "f";
      else if (dim == 3 && !even) letter = "p";
      else if ((dim == 2 || dim == 3) && even) letter = "d";
      else letter = "x";
    }
    std::string label;
    if (letter.empty()) {
      label = "sb" + std::to_string(group);
    } else {
      const int count = ++seen[{letter, dim}];
      label = std::to_string(count) + letter;
    }
    const double split = states[g0].e_b - states[g1 - 1].e_b;
    for (std::size_t i = g0; i < g1; ++i) {
      states[i].label = label;
      states[i].degeneracy_group = group;
      states[i].degeneracy = dim;
      states[i].group_split = split;
    }
    ++group;
    g0 = g1;
  }
}

double min_image_distance(const Grid& grid, Vec3 d) {
  for (const auto& p : grid.periodic_axes) d[p.axis] -= p.period * std::round(d[p.axis] / p.period);
  return d.norm();
}

}  // namespace

Eigen::MatrixXd assemble_kernel(const Grid& grid, double kappa) {
  return assemble<double>(grid, kappa, Vec3::Zero());
}

Eigen::MatrixXcd assemble_kernel(const Grid& grid, double kappa, const Vec3& bloch_k) {
  if (!grid.is_periodic() && !is_zero(bloch_k))
    throw InvalidArgument("Bloch wavevector given for an aperiodic grid");
  check_bloch(grid, bloch_k);
  return assemble<cplx>(grid, kappa, bloch_k);
}

BranchCurve branch_scan(const Grid& grid, const Coupling& coupling, double kappa_lo,
                        double kappa_hi, int n_samples, int m_branches, const Vec3& bloch_k,
                        const EigenOptions& eigen) {
  if (!(kappa_lo > 0.0) || !(kappa_hi > kappa_lo))
    throw InvalidArgument("kappa range must satisfy 0 < kappa_lo < kappa_hi");
  if (!(coupling.c < 0.0)) throw InvalidArgument("branch scan needs an attractive coupling");
  if (n_samples < 2) throw InvalidArgument("branch scan needs at least two samples");
  check_bloch(grid, bloch_k);
  const int m = std::clamp(m_branches, 1, static_cast<int>(grid.size()));
  if (is_zero(bloch_k)) {
    Engine<double> e(grid, coupling, bloch_k, eigen);
    return scan(e, kappa_lo, kappa_hi, n_samples, m);
  }
  Engine<cplx> e(grid, coupling, bloch_k, eigen);
  return scan(e, kappa_lo, kappa_hi, n_samples, m);
}

std::vector<BoundState> solve_bound_states(const Grid& grid, const Coupling& coupling,
                                           int max_states, const std::optional<Vec3>& bloch_k,
                                           const SolveOptions& opt) {
  if (!(coupling.c < 0.0)) return {};
  const Vec3 k = bloch_k.value_or(Vec3::Zero());
  if (bloch_k && !grid.is_periodic() && !is_zero(k))
    throw InvalidArgument("Bloch wavevector given for an aperiodic grid");
  check_bloch(grid, k);
  std::vector<BoundState> states = is_zero(k) ? solve<double>(grid, coupling, max_states, k, opt)
                                              : solve<cplx>(grid, coupling, max_states, k, opt);
  label_states(states, grid, opt.degeneracy_tol);
  if (static_cast<int>(states.size()) > max_states) states.resize(std::size_t(max_states));
  return states;
}

double absorption_lifetime(const Eigen::VectorXcd& psi, const Grid& grid, double t_star,
                           const Eigen::VectorXd& absorbing_fraction) {
  if (psi.size() != static_cast<Eigen::Index>(grid.size()) ||
      absorbing_fraction.size() != psi.size())
    throw GeometryMismatch("wavefunction and grid sizes differ");
  const double rate = (psi.cwiseAbs2().cwiseProduct(absorbing_fraction)).sum() * grid.cell_weight;
  if (!(rate > 0.0) || std::isinf(t_star)) return std::numeric_limits<double>::infinity();
  return t_star / rate;
}

Eigen::VectorXcd lattice_field(const BoundState& state, const Grid& grid,
                               const Coupling& coupling,
                               const std::vector<LatticeIndex>& sites) {
  if (state.grid_fingerprint != grid.fingerprint() ||
      state.psi.size() != static_cast<Eigen::Index>(grid.size()))
    throw GeometryMismatch("state was not computed on this grid");
  for (const auto& s : sites)
    for (const auto& p : grid.periodic_axes) {
      const int layers = static_cast<int>(std::lround(p.period / grid.spacing));
      if (s[p.axis] < 0 || s[p.axis] >= layers)
        throw InvalidArgument("lattice field sites must lie within one period");
    }
  const double scale = -coupling.c / state.lambda;
  Eigen::VectorXcd f = is_zero(state.bloch_k)
                           ? convolve_sites<double>(grid, state.kappa, state.bloch_k, state.psi, sites)
                           : convolve_sites<cplx>(grid, state.kappa, state.bloch_k, state.psi, sites);
  return scale * f;
}

Eigen::VectorXcd reconstruct_wavefunction(const BoundState& state, const Grid& grid,
                                          const Coupling& coupling,
                                          const std::vector<Vec3>& eval_points) {
  if (state.grid_fingerprint != grid.fingerprint() ||
      state.psi.size() != static_cast<Eigen::Index>(grid.size()))
    throw GeometryMismatch("state was not computed on this grid");
  const double min_sep = 0.1 * grid.spacing;
  for (const auto& r : eval_points)
    for (const auto& p : grid.points)
      if (min_image_distance(grid, r - p) < min_sep) {
        std::ostringstream msg;
        msg << "evaluation point (" << r.x() << ", " << r.y() << ", " << r.z()
            << ") lies within a0/10 of a grid site";
        throw EvalTooCloseToSource(msg.str());
      }
  const YukawaImageSum g(grid.periodic_axes, state.kappa, state.bloch_k);
  const double scale = -coupling.c / state.lambda;
  Eigen::VectorXcd out(static_cast<Eigen::Index>(eval_points.size()));
  const auto count = static_cast<std::ptrdiff_t>(eval_points.size());
  const std::size_t n = grid.size();
#pragma omp parallel for schedule(static, 16)
  for (std::ptrdiff_t e = 0; e < count; ++e) {
    cplx acc(0.0, 0.0);
    for (std::size_t j = 0; j < n; ++j)
      acc += g(eval_points[e] - grid.points[j]) * state.psi[static_cast<Eigen::Index>(j)];
    out[e] = scale * acc;
  }
  return out;
}

double interior_probability(const BoundState& state, const Grid& grid, const Coupling& coupling) {
  const double a0 = grid.spacing;
  const double decay = 4.0 / state.kappa;
  std::vector<LatticeIndex> sites;
  auto add_if_outside = [&](const LatticeIndex& idx) {
    if (!grid.contains(idx)) sites.push_back(idx);
  };
  switch (grid.spec.shape) {
    case Shape::sphere: {
      const double R = grid.spec.radius;
      const double h = std::min(std::max(1.5 * R, R + decay), 4.0 * R);
      const int nh = static_cast<int>(std::ceil(h / a0 - grid.offset[0]));
      for (int i = -nh - 1; i <= nh; ++i)
        for (int j = -nh - 1; j <= nh; ++j)
          for (int l = -nh - 1; l <= nh; ++l) {
            const LatticeIndex idx{i, j, l};
            const Vec3 r = grid.lattice_point(idx) - grid.spec.center;
            if (r.cwiseAbs().maxCoeff() <= h) add_if_outside(idx);
          }
      break;
    }
    case Shape::cylinder: {
      const double R = grid.spec.radius;
      // Point budget per layer keeps the 2D exterior sum bounded.
      const double h = std::min(std::max(1.5 * R, R + decay), 400.0 * a0);
      const int nh = static_cast<int>(std::ceil(h / a0));
      const int layers = static_cast<int>(std::lround(grid.periodic_axes[0].period / a0));
      for (int i = -nh - 1; i <= nh; ++i)
        for (int j = -nh - 1; j <= nh; ++j)
          for (int l = 0; l < layers; ++l) {
            const LatticeIndex idx{i, j, l};
            const Vec3 r = grid.lattice_point(idx) - grid.spec.center;
            if (std::max(std::abs(r.x()), std::abs(r.y())) <= h) add_if_outside(idx);
          }
      break;
    }
    case Shape::slab: {
      const double H = 0.5 * grid.spec.thickness;
      const double h = std::max(1.5 * H, H + decay);
      const int nh = static_cast<int>(std::ceil(h / a0));
      const int l0 = static_cast<int>(std::lround(grid.periodic_axes[0].period / a0));
      const int l1 = static_cast<int>(std::lround(grid.periodic_axes[1].period / a0));
      for (int i = 0; i < l0; ++i)
        for (int j = 0; j < l1; ++j)
          for (int l = -nh - 1; l <= nh; ++l) {
            const LatticeIndex idx{i, j, l};
            const Vec3 r = grid.lattice_point(idx) - grid.spec.center;
            if (std::abs(r.z()) <= h) add_if_outside(idx);
          }
      break;
    }
  }
  const double inside = state.psi.squaredNorm() * grid.cell_weight;
  const double outside = lattice_field(state, grid, coupling, sites).squaredNorm() * grid.cell_weight;
  return inside / (inside + outside);
}

double finite_lifetime(const BoundState& state, const Grid& grid, const Coupling& coupling,
                       double t_star) {
  if (std::isinf(t_star)) return t_star;
  return t_star / interior_probability(state, grid, coupling);
}

double finite_lifetime(const BoundState& state, const Grid& grid,
                       const CrystalComposition& comp, const NuclideTable& table) {
  const CoherentSums sums = composition_sums(comp, table);
  if (sums.im_fm == 0.0) return std::numeric_limits<double>::infinity();
  const double t_star = 1.0 / bulk_absorption_rate(sums.im_fm, comp.cell_volume_nm3());
  return finite_lifetime(state, grid, Coupling::from_sums(sums.re_fm, comp.cell_volume_nm3(), grid.spacing),
                         t_star);
}

}  // namespace nqd
