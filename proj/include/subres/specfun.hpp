#pragma once

#include <complex>
#include <span>
#include <vector>

namespace subres {

using cplx = std::complex<double>;

/// Bessel and Hankel functions of integer order and complex argument.
///
/// Algorithm: ascending series (evaluated in extended precision) for
/// |z| <= kSeriesRadius, Hankel asymptotic expansions beyond it, Miller
/// backward recurrence for J_n at large |z| and forward recurrence for H_n.
/// Accuracy: ~1e-13 relative for |z| <= 50, |Im z| <= 5.
/// All functions are pure and reentrant.
namespace specfun {

inline constexpr double kSeriesRadius = 17.0;
inline constexpr double kEulerGamma = 0.57721566490153286060651209008240243;

cplx bessel_j(int n, cplx z);
cplx bessel_y(int n, cplx z);
cplx hankel1(int n, cplx z);

/// d/dz J_n(z) via (J_{n-1} - J_{n+1}) / 2.
cplx bessel_j_prime(int n, cplx z);
/// d/dz H_n^(1)(z) via (H_{n-1} - H_{n+1}) / 2.
cplx hankel1_prime(int n, cplx z);

/// J_0..J_nmax at z, written to out[0..nmax].
void bessel_j_range(int nmax, cplx z, std::span<cplx> out);
/// H_0..H_nmax at z.
void hankel1_range(int nmax, cplx z, std::span<cplx> out);

std::vector<cplx> bessel_j_range(int nmax, cplx z);
std::vector<cplx> hankel1_range(int nmax, cplx z);

}  // namespace specfun
}  // namespace subres
