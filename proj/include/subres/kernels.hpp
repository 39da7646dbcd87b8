#pragma once

#include <numbers>

#include "subres/geometry.hpp"
#include "subres/specfun.hpp"

namespace subres::kernels {

inline constexpr double kGamma = specfun::kEulerGamma;
/// (gamma - 1/2)/(4 pi) - i/8
inline const cplx c_gamma{(kGamma - 0.5) / (4.0 * std::numbers::pi), -0.125};
/// Coefficient of |x-y|^2 in G2: (gamma - 1)/(8 pi) - i/16
inline const cplx c_sl{(kGamma - 1.0) / (8.0 * std::numbers::pi), -0.0625};

/// -log(omega)/(2 pi) + i/4 - (gamma - log 2)/(2 pi), principal log.
cplx tau(cplx omega);

/// (i/4) H0(omega |x-y|).
cplx phi_omega(cplx omega, const Vec2& x, const Vec2& y);
/// Normal derivative of phi_omega in x along nu_x.
cplx dnu_phi_omega(cplx omega, const Vec2& x, const Vec2& y, const Vec2& nu_x);

/// Static kernels G0 = -log r/(2 pi), G1 = r^2/(8 pi), G2 = G1 log(r/2) + c_sl r^2.
cplx g_k(int k, const Vec2& x, const Vec2& y);
/// Normal derivatives in x. For k = 1, 2 the coincident-point limit is 0.
cplx dnu_g_k(int k, const Vec2& x, const Vec2& y, const Vec2& nu_x);

}  // namespace subres::kernels
