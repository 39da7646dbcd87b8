#include "subres/kernels.hpp"

#include <cmath>
#include <string>

#include "subres/errors.hpp"

namespace subres::kernels {
namespace {

constexpr double kPi = std::numbers::pi;

void check_k(int k) {
  if (k < 0 || k > 2) throw InvalidArgument("kernel order must be 0, 1 or 2, got " + std::to_string(k));
}

}  // namespace

cplx tau(cplx omega) {
  if (omega == cplx(0.0)) throw DomainError("tau: omega = 0");
  return -std::log(omega) / (2.0 * kPi) + cplx(0.0, 0.25) - (kGamma - std::log(2.0)) / (2.0 * kPi);
}

cplx phi_omega(cplx omega, const Vec2& x, const Vec2& y) {
  const double r = (x - y).norm();
  if (r == 0.0) throw DomainError("phi_omega: coincident points");
  if (omega == cplx(0.0)) throw DomainError("phi_omega: omega = 0");
  return cplx(0.0, 0.25) * specfun::hankel1(0, omega * r);
}

cplx dnu_phi_omega(cplx omega, const Vec2& x, const Vec2& y, const Vec2& nu_x) {
  const Vec2 d = x - y;
  const double r = d.norm();
  if (r == 0.0) throw DomainError("dnu_phi_omega: coincident points");
  if (omega == cplx(0.0)) throw DomainError("dnu_phi_omega: omega = 0");
  return cplx(0.0, -0.25) * omega * specfun::hankel1(1, omega * r) * (d.dot(nu_x) / r);
}

cplx g_k(int k, const Vec2& x, const Vec2& y) {
  check_k(k);
  const double r = (x - y).norm();
  switch (k) {
    case 0:
      if (r == 0.0) throw DomainError("g_0: coincident points");
      return -std::log(r) / (2.0 * kPi);
    case 1:
      return r * r / (8.0 * kPi);
    default:
      if (r == 0.0) return 0.0;
      return r * r / (8.0 * kPi) * std::log(r / 2.0) + c_sl * (r * r);
  }
}

cplx dnu_g_k(int k, const Vec2& x, const Vec2& y, const Vec2& nu_x) {
  check_k(k);
  const Vec2 d = x - y;
  const double r = d.norm();
  const double dn = d.dot(nu_x);
  switch (k) {
    case 0:
      if (r == 0.0) throw DomainError("dnu_g_0: coincident points");
      return -dn / (2.0 * kPi * r * r);
    case 1:
      return dn / (4.0 * kPi);
    default:
      if (r == 0.0) return 0.0;
      return dn / (4.0 * kPi) * std::log(r / 2.0) + c_gamma * dn;
  }
}

}  // namespace subres::kernels
