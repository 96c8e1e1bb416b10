#include "nqd/image_sum.hpp"

#include <cmath>

#include "nqd/constants.hpp"
#include "nqd/errors.hpp"

namespace nqd {

using constants::pi;
using cplx = std::complex<double>;

namespace {

double yukawa(double r, double kappa) { return std::exp(-kappa * r) / r; }

double short_range(double r, double kappa, double eta) {
  const double beta = kappa / (2.0 * eta);
  return 0.5 / r *
         (std::exp(-kappa * r) * std::erfc(eta * r - beta) +
          std::exp(kappa * r) * std::erfc(eta * r + beta));
}

// Long-range remainder exp(-kappa r)/r - short_range(r) at r -> 0.
double long_range_origin(double kappa, double eta) {
  const double beta = kappa / (2.0 * eta);
  return 2.0 * eta / std::sqrt(pi) * std::exp(-beta * beta) - kappa * std::erfc(beta);
}

cplx phase(double x) { return {std::cos(x), std::sin(x)}; }

}  // namespace

YukawaImageSum::YukawaImageSum(std::vector<PeriodicAxis> axes, double kappa, const Vec3& bloch_k,
                               double tol)
    : axes_(std::move(axes)), kappa_(kappa), k_(bloch_k), tol_(tol) {
  if (axes_.size() > 2) throw InvalidArgument("at most two periodic axes are supported");
  if (axes_.size() == 2 && axes_[0].axis == axes_[1].axis)
    throw InvalidArgument("periodic axes must be distinct");
  for (const auto& a : axes_)
    if (a.axis < 0 || a.axis > 2 || !(a.period > 0.0))
      throw InvalidArgument("invalid periodic axis");
  for (int d = 0; d < 3; ++d) {
    bool periodic = false;
    for (const auto& a : axes_) periodic |= a.axis == d;
    if (!periodic && k_[d] != 0.0)
      throw InvalidArgument("Bloch wavevector must lie along periodic axes");
  }
  if (!axes_.empty() && !(kappa_ > 0.0))
    throw UnboundedImageSet("periodic image sum needs kappa > 0");
  if (axes_.empty() && kappa_ < 0.0) throw InvalidArgument("kappa must be non-negative");
}

cplx YukawaImageSum::operator()(const Vec3& r) const {
  switch (axes_.size()) {
    case 0: {
      const double d = r.norm();
      return d > 0.0 ? cplx(yukawa(d, kappa_), 0.0) : cplx(0.0, 0.0);
    }
    case 1: return one_axis(r);
    default: return two_axes(r);
  }
}

cplx YukawaImageSum::one_axis(const Vec3& r) const {
  const int ax = axes_[0].axis;
  const double p = axes_[0].period;
  const double kz = k_[ax];
  const double z = r[ax];
  double rho2 = 0.0;
  for (int d = 0; d < 3; ++d)
    if (d != ax) rho2 += r[d] * r[d];
  const double rho = std::sqrt(rho2);

  if (rho >= 0.1 * p) {
    // (1/p) sum_G 2 K0(rho sqrt(kappa^2 + q^2)) exp(i q z), q = G - k.
    const double budget = std::log(1.0 / tol_) + 2.0;
    const int m_max = static_cast<int>(std::ceil(budget * p / (2.0 * pi * rho))) + 2;
    auto term = [&](int m) {
      const double q = 2.0 * pi * m / p - kz;
      const double x = rho * std::sqrt(kappa_ * kappa_ + q * q);
      if (x > 700.0) return cplx(0.0, 0.0);
      return 2.0 * std::cyl_bessel_k(0.0, x) * phase(q * z);
    };
    cplx sum = term(0);
    for (int m = 1; m <= m_max; ++m) sum += term(m) + term(-m);
    return sum / p;
  }

  const double j = std::round(z / p);
  if (rho <= 1e-9 * p && std::abs(z - j * p) <= 1e-9 * p) {
    // On a source column: exp(-i k j p) * sum_{m != 0} exp(i k m p) exp(-kappa |m| p) / (|m| p)
    //   = -exp(-i k j p) / p * ln|1 - exp(-(kappa - i k) p)|^2
    const double e = std::exp(-kappa_ * p);
    const double s = std::sin(0.5 * kz * p);
    const double re = -std::expm1(-kappa_ * p) + 2.0 * e * s * s;
    const double im = e * std::sin(kz * p);
    const double self = -std::log(re * re + im * im) / p;
    return self * phase(-kz * j * p);
  }
  return direct_image_sum(axes_, kappa_, k_, r, tol_);
}

cplx YukawaImageSum::two_axes(const Vec3& r) const {
  const int a0 = axes_[0].axis, a1 = axes_[1].axis;
  const int a2 = 3 - a0 - a1;
  const double p0 = axes_[0].period, p1 = axes_[1].period;
  const double z = std::abs(r[a2]);
  const double p_min = std::min(p0, p1);

  if (z >= 0.05 * p_min) {
    // (2 pi / A) sum_G exp(i q.rho) exp(-|z| gamma) / gamma, gamma = sqrt(kappa^2 + |q|^2).
    const double budget = std::log(1.0 / tol_) + 2.0;
    const int m0 = static_cast<int>(std::ceil(budget * p0 / (2.0 * pi * z))) + 2;
    const int m1 = static_cast<int>(std::ceil(budget * p1 / (2.0 * pi * z))) + 2;
    auto term = [&](int i, int j) {
      const double q0 = 2.0 * pi * i / p0 - k_[a0];
      const double q1 = 2.0 * pi * j / p1 - k_[a1];
      const double gamma = std::sqrt(kappa_ * kappa_ + q0 * q0 + q1 * q1);
      return std::exp(-z * gamma) / gamma * phase(q0 * r[a0] + q1 * r[a1]);
    };
    cplx sum = term(0, 0);
    for (int i = 0; i <= m0; ++i)
      for (int j = -m1; j <= m1; ++j)
        if (i > 0 || j > 0) sum += term(i, j) + term(-i, -j);
    return 2.0 * pi / (p0 * p1) * sum;
  }
  if (z <= 1e-12 * p_min) return two_axes_ewald(r[a0], r[a1]);
  return direct_image_sum(axes_, kappa_, k_, r, tol_);
}

cplx YukawaImageSum::two_axes_ewald(double rho0, double rho1) const {
  const int a0 = axes_[0].axis, a1 = axes_[1].axis;
  const double p0 = axes_[0].period, p1 = axes_[1].period;
  const double area = p0 * p1;
  const double eta = std::sqrt(pi / area);
  const double beta = kappa_ / (2.0 * eta);
  const double k0 = k_[a0], k1 = k_[a1];

  // Real-space part: sum_L exp(i k.L) short_range(|rho + L|).
  const double reach = (6.5 + beta) / eta + std::hypot(rho0, rho1);
  const int n0 = static_cast<int>(std::ceil(reach / p0)) + 1;
  const int n1 = static_cast<int>(std::ceil(reach / p1)) + 1;
  const double tiny = 1e-12 * std::min(p0, p1);
  cplx real_part(0.0, 0.0);
  cplx omitted(0.0, 0.0);
  bool has_omitted = false;
  auto real_term = [&](int i, int j) -> cplx {
    const double x0 = rho0 + i * p0, x1 = rho1 + j * p1;
    const double d = std::hypot(x0, x1);
    const cplx ph = phase(k0 * i * p0 + k1 * j * p1);
    if (d <= tiny) {
      has_omitted = true;
      omitted = ph;
      return {0.0, 0.0};
    }
    return short_range(d, kappa_, eta) * ph;
  };
  real_part += real_term(0, 0);
  for (int i = 0; i <= n0; ++i)
    for (int j = -n1; j <= n1; ++j)
      if (i > 0 || j > 0) real_part += real_term(i, j) + real_term(-i, -j);

  // Reciprocal part: (2 pi / A) sum_G exp(i q.rho) erfc(gamma / 2 eta) / gamma.
  const int m0 = static_cast<int>(std::ceil((13.0 * eta + std::abs(k0)) * p0 / (2.0 * pi))) + 1;
  const int m1 = static_cast<int>(std::ceil((13.0 * eta + std::abs(k1)) * p1 / (2.0 * pi))) + 1;
  auto rec_term = [&](int i, int j) {
    const double q0 = 2.0 * pi * i / p0 - k0;
    const double q1 = 2.0 * pi * j / p1 - k1;
    const double gamma = std::sqrt(kappa_ * kappa_ + q0 * q0 + q1 * q1);
    return std::erfc(gamma / (2.0 * eta)) / gamma * phase(q0 * rho0 + q1 * rho1);
  };
  cplx rec_part = rec_term(0, 0);
  for (int i = 0; i <= m0; ++i)
    for (int j = -m1; j <= m1; ++j)
      if (i > 0 || j > 0) rec_part += rec_term(i, j) + rec_term(-i, -j);
  rec_part *= 2.0 * pi / area;

  cplx sum = real_part + rec_part;
  if (has_omitted) sum -= omitted * long_range_origin(kappa_, eta);
  return sum;
}

cplx direct_image_sum(const std::vector<PeriodicAxis>& axes, double kappa, const Vec3& bloch_k,
                      const Vec3& r, double tol) {
  double p_min = axes.empty() ? 1.0 : axes.front().period;
  for (const auto& a : axes) p_min = std::min(p_min, a.period);
  const double tiny = 1e-12 * p_min;

  cplx sum(0.0, 0.0);
  const double d0 = r.norm();
  if (d0 > tiny) sum += yukawa(d0, kappa);
  if (axes.empty()) return sum;

  const ImageSet images = periodic_displacements(axes, kappa, tol);
  for (const auto& L : images.displacements) {
    const double d = (r + L).norm();
    if (d <= tiny) continue;
    sum += yukawa(d, kappa) * phase(bloch_k.dot(L));
  }
  return sum;
}

}  // namespace nqd
