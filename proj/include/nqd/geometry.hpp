#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace nqd {

using Vec3 = Eigen::Vector3d;

enum class Shape { sphere, cylinder, slab };

std::string to_string(Shape shape);

/// Nanostructure to discretize. The characteristic size is the radius for
/// spheres and cylinders (cylinder axis along z) and the thickness for slabs
/// (normal along z, periodic in x and y). Lattice spacing a0 = size / grid_div.
struct GeometrySpec {
  Shape shape = Shape::sphere;
  double radius = 0.0;     // nm, sphere and cylinder
  double thickness = 0.0;  // nm, slab
  int grid_div = 10;
  Vec3 center = Vec3::Zero();
  /// Periods along the periodic axes, nm. Default is one lattice spacing;
  /// an explicit value must be an integer multiple of a0.
  std::optional<double> period;

  static GeometrySpec sphere(double radius, int grid_div = 10);
  static GeometrySpec cylinder(double radius, int grid_div = 10);
  static GeometrySpec slab(double thickness, int grid_div = 10);
  /// Slab with the default resolution, see slab_grid_div.
  static GeometrySpec slab_resolved(double thickness);

  double characteristic_size() const;
  double spacing() const { return characteristic_size() / grid_div; }
  /// Throws InvalidArgument on non-positive sizes or grid_div < 4.
  void validate() const;
};

/// Divisions that keep a slab spacing at or below max_spacing_nm, and never
/// fewer than 10. A slab is a single column, so fine spacings are cheap, while
/// the in-plane image lattice of period a0 needs kappa a0 well below 1.
int slab_grid_div(double thickness, double max_spacing_nm = 2.0);

struct PeriodicAxis {
  int axis = 0;  // 0 = x, 1 = y, 2 = z
  double period = 0.0;
  friend bool operator==(const PeriodicAxis&, const PeriodicAxis&) = default;
};

using LatticeIndex = std::array<int, 3>;

/// Coarse-grain point cloud. Point i sits at
/// center + (index[i] + offset) * spacing, where offset is 1/2 on confined
/// axes (the shape center falls between lattice planes) and 0 on periodic axes.
struct Grid {
  GeometrySpec spec;
  std::vector<Vec3> points;
  std::vector<LatticeIndex> index;
  double spacing = 0.0;
  double cell_weight = 0.0;  // spacing^3, nm^3
  std::vector<PeriodicAxis> periodic_axes;
  Vec3 offset = Vec3::Zero();

  std::size_t size() const { return points.size(); }
  bool is_periodic() const { return !periodic_axes.empty(); }
  bool is_periodic_axis(int axis) const;

  /// Position of an arbitrary lattice index (inside or outside the shape).
  Vec3 lattice_point(const LatticeIndex& idx) const;
  /// Whether a lattice index lies inside the shape.
  bool contains(const LatticeIndex& idx) const;

  /// Stable identity of the discretization (shape, sizes, spacing, points).
  std::uint64_t fingerprint() const;
};

/// Cubic lattice of spacing a0 intersected with the shape. A point is kept
/// iff its position is inside the closed analytic shape.
/// Throws EmptyGrid when no lattice point falls inside.
Grid build_grid(const GeometrySpec& spec);

/// Periodic image lattice vectors L != 0 with exp(-kappa |L|) >= tol.
struct ImageSet {
  std::vector<Vec3> displacements;
  std::vector<std::array<int, 2>> indices;  // integer coefficients per periodic axis
  int n_max = 0;                            // ceil(ln(1/tol) / (kappa p_min))
};

/// Throws UnboundedImageSet when kappa <= 0 on a periodic grid.
ImageSet periodic_displacements(const Grid& grid, double kappa, double tol);
ImageSet periodic_displacements(const std::vector<PeriodicAxis>& axes, double kappa, double tol);

}  // namespace nqd
