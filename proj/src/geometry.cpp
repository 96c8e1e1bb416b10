#include "nqd/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "nqd/errors.hpp"

namespace nqd {

std::string to_string(Shape shape) {
  switch (shape) {
    case Shape::sphere: return "sphere";
    case Shape::cylinder: return "cylinder";
    case Shape::slab: return "slab";
  }
  return "unknown";
}

GeometrySpec GeometrySpec::sphere(double radius, int grid_div) {
  GeometrySpec s;
  s.shape = Shape::sphere;
  s.radius = radius;
  s.grid_div = grid_div;
  return s;
}

GeometrySpec GeometrySpec::cylinder(double radius, int grid_div) {
  GeometrySpec s = sphere(radius, grid_div);
  s.shape = Shape::cylinder;
  return s;
}

GeometrySpec GeometrySpec::slab(double thickness, int grid_div) {
  GeometrySpec s;
  s.shape = Shape::slab;
  s.thickness = thickness;
  s.grid_div = grid_div;
  return s;
}

GeometrySpec GeometrySpec::slab_resolved(double thickness) {
  return slab(thickness, slab_grid_div(thickness));
}

int slab_grid_div(double thickness, double max_spacing_nm) {
  if (!(thickness > 0.0) || !(max_spacing_nm > 0.0))
    throw InvalidArgument("slab thickness and spacing must be positive");
  return std::max(10, static_cast<int>(std::ceil(thickness / max_spacing_nm - 1e-9)));
}

double GeometrySpec::characteristic_size() const {
  return shape == Shape::slab ? thickness : radius;
}

void GeometrySpec::validate() const {
  if (shape == Shape::slab) {
    if (!(thickness > 0.0)) throw InvalidArgument("slab thickness must be positive");
  } else if (!(radius > 0.0)) {
    throw InvalidArgument(to_string(shape) + " radius must be positive");
  }
  if (grid_div < 4) throw InvalidArgument("grid_div must be >= 4");
  if (period) {
    if (shape == Shape::sphere) throw InvalidArgument("a sphere has no periodic axes");
    const double layers = *period / spacing();
    if (!(*period > 0.0) || std::abs(layers - std::round(layers)) > 1e-9 * layers)
      throw InvalidArgument("period must be a positive integer multiple of the grid spacing");
  }
}

bool Grid::is_periodic_axis(int axis) const {
  for (const auto& p : periodic_axes)
    if (p.axis == axis) return true;
  return false;
}

Vec3 Grid::lattice_point(const LatticeIndex& idx) const {
  return spec.center +
         spacing * Vec3(idx[0] + offset[0], idx[1] + offset[1], idx[2] + offset[2]);
}

bool Grid::contains(const LatticeIndex& idx) const {
  // Membership in units of the spacing, relative to the shape center.
  const double u[3] = {idx[0] + offset[0], idx[1] + offset[1], idx[2] + offset[2]};
  const double n = spec.grid_div;
  const double slack = 1e-9 * n * n;
  switch (spec.shape) {
    case Shape::sphere: return u[0] * u[0] + u[1] * u[1] + u[2] * u[2] <= n * n + slack;
    case Shape::cylinder: {
      if (u[0] * u[0] + u[1] * u[1] > n * n + slack) return false;
      const int layers = static_cast<int>(std::lround(periodic_axes.front().period / spacing));
      return idx[2] >= 0 && idx[2] < layers;
    }
    case Shape::slab: {
      if (std::abs(u[2]) > 0.5 * n + 1e-9 * n) return false;
      const int l0 = static_cast<int>(std::lround(periodic_axes[0].period / spacing));
      const int l1 = static_cast<int>(std::lround(periodic_axes[1].period / spacing));
      return idx[0] >= 0 && idx[0] < l0 && idx[1] >= 0 && idx[1] < l1;
    }
  }
  return false;
}

std::uint64_t Grid::fingerprint() const {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
      h ^= p[i];
      h *= 1099511628211ull;
    }
  };
  const int shape = static_cast<int>(spec.shape);
  mix(&shape, sizeof shape);
  mix(&spacing, sizeof spacing);
  for (const auto& p : points) mix(p.data(), 3 * sizeof(double));
  for (const auto& a : periodic_axes) {
    mix(&a.axis, sizeof a.axis);
    mix(&a.period, sizeof a.period);
  }
  return h;
}

Grid build_grid(const GeometrySpec& spec) {
  spec.validate();
  Grid g;
  g.spec = spec;
  g.spacing = spec.spacing();
  g.cell_weight = g.spacing * g.spacing * g.spacing;
  const double period = spec.period.value_or(g.spacing);

  int lo[3] = {0, 0, 0}, hi[3] = {0, 0, 0};
  const int n = spec.grid_div;
  switch (spec.shape) {
    case Shape::sphere:
      g.offset = Vec3(0.5, 0.5, 0.5);
      for (int a = 0; a < 3; ++a) lo[a] = -n - 1, hi[a] = n;
      break;
    case Shape::cylinder: {
      g.periodic_axes = {{2, period}};
      g.offset = Vec3(0.5, 0.5, 0.0);
      for (int a = 0; a < 2; ++a) lo[a] = -n - 1, hi[a] = n;
      lo[2] = 0, hi[2] = static_cast<int>(std::lround(period / g.spacing)) - 1;
      break;
    }
    case Shape::slab: {
      g.periodic_axes = {{0, period}, {1, period}};
      // Even layer counts straddle the mid-plane, odd ones sit on it.
      g.offset = Vec3(0.0, 0.0, n % 2 == 0 ? 0.5 : 0.0);
      const int layers = static_cast<int>(std::lround(period / g.spacing));
      lo[0] = lo[1] = 0, hi[0] = hi[1] = layers - 1;
      lo[2] = -n - 1, hi[2] = n;
      break;
    }
  }

  for (int i = lo[0]; i <= hi[0]; ++i)
    for (int j = lo[1]; j <= hi[1]; ++j)
      for (int k = lo[2]; k <= hi[2]; ++k) {
        const LatticeIndex idx{i, j, k};
        if (!g.contains(idx)) continue;
        g.index.push_back(idx);
        g.points.push_back(g.lattice_point(idx));
      }
  if (g.points.empty()) throw EmptyGrid("no lattice point inside the " + to_string(spec.shape));
  return g;
}

ImageSet periodic_displacements(const Grid& grid, double kappa, double tol) {
  return periodic_displacements(grid.periodic_axes, kappa, tol);
}

ImageSet periodic_displacements(const std::vector<PeriodicAxis>& ax, double kappa, double tol) {
  ImageSet set;
  if (ax.empty()) return set;
  if (!(kappa > 0.0))
    throw UnboundedImageSet("periodic image sum needs kappa > 0, got " + std::to_string(kappa));
  if (!(tol > 0.0)) throw InvalidArgument("image tolerance must be positive");
  if (tol >= 1.0) return set;

  double p_min = ax.front().period;
  for (const auto& a : ax) p_min = std::min(p_min, a.period);
  const double reach = std::log(1.0 / tol) / kappa;  // |L| <= reach
  set.n_max = static_cast<int>(std::ceil(reach / p_min));

  const int n0 = static_cast<int>(std::floor(reach / ax[0].period));
  const int n1 = ax.size() > 1 ? static_cast<int>(std::floor(reach / ax[1].period)) : 0;
  for (int i = -n0; i <= n0; ++i)
    for (int j = -n1; j <= n1; ++j) {
      if (i == 0 && j == 0) continue;
      Vec3 L = Vec3::Zero();
      L[ax[0].axis] += i * ax[0].period;
      if (ax.size() > 1) L[ax[1].axis] += j * ax[1].period;
      if (std::exp(-kappa * L.norm()) < tol) continue;
      set.displacements.push_back(L);
      set.indices.push_back({i, j});
    }
  return set;
}

}  // namespace nqd
