#pragma once

#include <complex>
#include <vector>

#include "nqd/geometry.hpp"

namespace nqd {

/// Bloch-phased Yukawa image sum
///
///   g(r) = sum_L exp(i k.L) exp(-kappa |r + L|) / |r + L|
///
/// over the lattice of periodic image vectors L (none, one or two orthogonal
/// coordinate axes). The term with |r + L| = 0 is omitted, which makes g(0) the
/// self-image sum used on kernel diagonals.
///
/// One periodic axis uses the Poisson-resummed Bessel series off the axis and
/// the closed-form logarithm on it. Two axes use the exponential plane-wave
/// series away from the plane and Ewald splitting in it. Remaining corner cases
/// (close to, but not on, a source column or plane) fall back to direct summation.
class YukawaImageSum {
public:
  YukawaImageSum(std::vector<PeriodicAxis> axes, double kappa, const Vec3& bloch_k = Vec3::Zero(),
                 double tol = 1e-15);

  std::complex<double> operator()(const Vec3& r) const;

  double kappa() const { return kappa_; }
  const Vec3& bloch_k() const { return k_; }
  const std::vector<PeriodicAxis>& axes() const { return axes_; }

private:
  std::complex<double> one_axis(const Vec3& r) const;
  std::complex<double> two_axes(const Vec3& r) const;
  std::complex<double> two_axes_ewald(double rho0, double rho1) const;

  std::vector<PeriodicAxis> axes_;
  double kappa_;
  Vec3 k_;
  double tol_;
};

/// Reference evaluation of the same sum by explicit enumeration of the images
/// returned by periodic_displacements(axes, kappa, tol).
std::complex<double> direct_image_sum(const std::vector<PeriodicAxis>& axes, double kappa,
                                      const Vec3& bloch_k, const Vec3& r, double tol = 1e-15);

}  // namespace nqd
