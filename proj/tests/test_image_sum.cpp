#include <doctest.h>

#include <cmath>
#include <random>

#include "nqd/errors.hpp"
#include "nqd/image_sum.hpp"

using namespace nqd;
using cplx = std::complex<double>;

namespace {

void check_close(cplx a, cplx b, double tol) {
  const double scale = std::max(std::abs(b), 1e-300);
  CHECK(std::abs(a - b) / scale < tol);
}

}  // namespace

TEST_CASE("aperiodic sum is the bare Yukawa kernel") {
  const YukawaImageSum g({}, 1.0);
  CHECK(g(Vec3(1, 0, 0)).real() == doctest::Approx(std::exp(-1.0)));
  CHECK(g(Vec3::Zero()) == cplx(0.0, 0.0));
}

TEST_CASE("one periodic axis matches direct summation") {
  const std::vector<PeriodicAxis> ax{{2, 1.3}};
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (double kappa : {0.4, 1.0, 3.0}) {
    for (double k : {0.0, 0.9, -2.1}) {
      const Vec3 bk(0, 0, k);
      const YukawaImageSum g(ax, kappa, bk);
      for (int trial = 0; trial < 6; ++trial) {
        const Vec3 r(u(rng), u(rng), u(rng));
        check_close(g(r), direct_image_sum(ax, kappa, bk, r), 1e-10);
      }
      // On the source column: closed-form logarithm, including the j != 0 phase.
      for (int j : {0, 1, -2}) {
        const Vec3 r(0, 0, j * 1.3);
        check_close(g(r), direct_image_sum(ax, kappa, bk, r), 1e-10);
      }
      // Close to the column falls back to, or agrees with, direct summation.
      check_close(g(Vec3(1e-7, 0, 0.4)), direct_image_sum(ax, kappa, bk, Vec3(1e-7, 0, 0.4)), 1e-9);
    }
  }
}

TEST_CASE("two periodic axes match direct summation") {
  const std::vector<PeriodicAxis> ax{{0, 1.0}, {1, 1.4}};
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (double kappa : {0.8, 2.0}) {
    for (const Vec3& bk : {Vec3(0, 0, 0), Vec3(0.7, -1.1, 0), Vec3(3.0, 0.2, 0)}) {
      const YukawaImageSum g(ax, kappa, bk);
      for (int trial = 0; trial < 5; ++trial) {
        const Vec3 r(u(rng), u(rng), u(rng));
        check_close(g(r), direct_image_sum(ax, kappa, bk, r), 1e-10);
        // In-plane points: Ewald route.
        const Vec3 rp(u(rng), u(rng), 0.0);
        check_close(g(rp), direct_image_sum(ax, kappa, bk, rp), 1e-10);
      }
      check_close(g(Vec3::Zero()), direct_image_sum(ax, kappa, bk, Vec3::Zero()), 1e-10);
      check_close(g(Vec3(2.0, -1.4, 0)), direct_image_sum(ax, kappa, bk, Vec3(2.0, -1.4, 0)), 1e-10);
      // Between the plane and the spectral threshold: direct fallback.
      check_close(g(Vec3(0.3, 0.2, 0.01)), direct_image_sum(ax, kappa, bk, Vec3(0.3, 0.2, 0.01)), 1e-10);
    }
  }
}

TEST_CASE("zero Bloch vector gives real sums and opposite vectors conjugate ones") {
  const std::vector<PeriodicAxis> ax{{0, 1.0}, {1, 1.0}};
  const YukawaImageSum g0(ax, 0.5);
  const YukawaImageSum gp(ax, 0.5, Vec3(0.8, 0.3, 0));
  const YukawaImageSum gm(ax, 0.5, Vec3(-0.8, -0.3, 0));
  for (const Vec3& r : {Vec3(0.2, 0.1, 0.0), Vec3(0.3, -0.4, 0.7), Vec3(0.0, 0.0, 0.0)}) {
    CHECK(g0(r).imag() == 0.0);
    CHECK(std::abs(gp(r) - std::conj(gm(r))) < 1e-12 * std::abs(gp(r)));
    CHECK(std::abs(gp(-r) - std::conj(gp(r))) < 1e-12 * std::abs(gp(r)));
  }
}

TEST_CASE("image sum preconditions") {
  CHECK_THROWS_AS(YukawaImageSum({{2, 1.0}}, 0.0), UnboundedImageSet);
  CHECK_THROWS_AS(YukawaImageSum({{2, 1.0}}, 1.0, Vec3(1, 0, 0)), InvalidArgument);
}
