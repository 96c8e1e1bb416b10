#include <doctest.h>

#include <cmath>
#include <set>

#include "nqd/constants.hpp"
#include "nqd/errors.hpp"
#include "nqd/geometry.hpp"

using namespace nqd;

TEST_CASE("sphere grid") {
  const Grid g = build_grid(GeometrySpec::sphere(30.0, 10));
  CHECK(g.spacing == doctest::Approx(3.0));
  CHECK(g.cell_weight == doctest::Approx(27.0));
  const double expect = 4.0 * constants::pi / 3.0 * 1000.0;
  CHECK(std::abs(double(g.size()) - expect) / expect < 0.1);
  CHECK_FALSE(g.is_periodic());
  Vec3 mean = Vec3::Zero();
  for (const auto& p : g.points) {
    CHECK(p.norm() <= 30.0 + 1e-9);
    mean += p;
  }
  CHECK((mean / double(g.size())).norm() < 1e-12);
}

TEST_CASE("points are pairwise distinct and inside") {
  for (const auto& spec : {GeometrySpec::sphere(5.0, 6), GeometrySpec::cylinder(7.0, 5),
                           GeometrySpec::slab(3.0, 7)}) {
    const Grid g = build_grid(spec);
    std::set<LatticeIndex> seen(g.index.begin(), g.index.end());
    CHECK(seen.size() == g.size());
    for (const auto& idx : g.index) CHECK(g.contains(idx));
  }
}

TEST_CASE("slab grid") {
  for (int n : {10, 7}) {
    const Grid g = build_grid(GeometrySpec::slab(10.0, n));
    CHECK(g.size() == std::size_t(n));
    CHECK(g.periodic_axes.size() == 2);
    CHECK(g.periodic_axes[0].period == doctest::Approx(10.0 / n));
    double zmin = 1e9, zmax = -1e9;
    for (const auto& p : g.points) {
      CHECK(p.x() == 0.0);
      CHECK(p.y() == 0.0);
      zmin = std::min(zmin, p.z());
      zmax = std::max(zmax, p.z());
    }
    CHECK(zmin == doctest::Approx(-zmax));
  }
}

TEST_CASE("cylinder grid spans one period") {
  const Grid g = build_grid(GeometrySpec::cylinder(40.0, 10));
  REQUIRE(g.periodic_axes.size() == 1);
  CHECK(g.periodic_axes[0].axis == 2);
  for (const auto& p : g.points) CHECK(p.z() == 0.0);
  auto spec = GeometrySpec::cylinder(40.0, 10);
  spec.period = 12.0;
  const Grid g3 = build_grid(spec);
  CHECK(g3.size() == 3 * g.size());
  spec.period = 10.0;
  CHECK_THROWS_AS(build_grid(spec), InvalidArgument);
}

TEST_CASE("small sphere is nonempty and centered") {
  const Grid g = build_grid(GeometrySpec::sphere(1.0, 10));
  CHECK(g.spacing == doctest::Approx(0.1));
  CHECK(g.size() > 0);
  Vec3 mean = Vec3::Zero();
  for (const auto& p : g.points) mean += p;
  CHECK((mean / double(g.size())).norm() < 1e-12);
}

TEST_CASE("invalid specs") {
  CHECK_THROWS_AS(build_grid(GeometrySpec::sphere(-1.0)), InvalidArgument);
  CHECK_THROWS_AS(build_grid(GeometrySpec::sphere(10.0, 3)), InvalidArgument);
  CHECK_THROWS_AS(build_grid(GeometrySpec::slab(0.0)), InvalidArgument);
}

TEST_CASE("translating the center translates every point") {
  auto spec = GeometrySpec::sphere(6.0, 5);
  const Grid a = build_grid(spec);
  spec.center = Vec3(1.5, -2.25, 0.75);
  const Grid b = build_grid(spec);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    CHECK((b.points[i] - a.points[i] - spec.center).norm() < 1e-12);
}

TEST_CASE("periodic displacements") {
  const std::vector<PeriodicAxis> one{{2, 4.0}};
  const ImageSet s = periodic_displacements(one, 0.07, 1e-10);
  const int n_max = static_cast<int>(std::ceil(std::log(1e10) / (0.07 * 4.0)));
  CHECK(n_max == 83);
  CHECK(s.n_max == n_max);
  // e^{-kappa |n| p} >= tol keeps |n| <= 82.
  CHECK(s.displacements.size() == 2 * 82);
  int lo = 0, hi = 0;
  for (const auto& ij : s.indices) lo = std::min(lo, ij[0]), hi = std::max(hi, ij[0]);
  CHECK(lo == -82);
  CHECK(hi == 82);

  CHECK(periodic_displacements(one, 0.07, 1.0).displacements.empty());
  CHECK_THROWS_AS(periodic_displacements(one, 0.0, 1e-6), UnboundedImageSet);

  const std::vector<PeriodicAxis> two{{0, 1.0}, {1, 1.5}};
  const ImageSet s2 = periodic_displacements(two, 0.3, 1e-6);
  std::set<std::array<int, 2>> idx(s2.indices.begin(), s2.indices.end());
  for (const auto& ij : s2.indices) {
    CHECK(idx.count({-ij[0], ij[1]}) == 1);
    CHECK(idx.count({ij[0], -ij[1]}) == 1);
    CHECK(!(ij[0] == 0 && ij[1] == 0));
  }
}
