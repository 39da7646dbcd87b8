#include "subres/specfun.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "subres/errors.hpp"

namespace subres::specfun {
namespace {

using ld = long double;
using cld = std::complex<long double>;

constexpr ld kPiL = 3.141592653589793238462643383279502884L;
constexpr ld kGammaL = 0.577215664901532860606512090082402431L;

void check_finite(cplx z, const char* who) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
    throw InvalidArgument(std::string(who) + ": non-finite argument");
  }
}

double sign_of_order(int n) { return (n % 2 == 0) ? 1.0 : -1.0; }

// J_n(z), n >= 0, by the ascending series.
cld j_series(int n, cld z) {
  const cld half = z / 2.0L;
  const cld q = -half * half;
  cld term = 1.0L;
  for (int k = 1; k <= n; ++k) term *= half / static_cast<ld>(k);
  cld sum = term;
  for (int k = 0; k < 400; ++k) {
    term *= q / (static_cast<ld>(k + 1) * static_cast<ld>(n + k + 1));
    sum += term;
    if (std::abs(term) <= 1e-22L * std::abs(sum) && k > std::abs(z)) break;
    if (term == cld(0)) break;
  }
  return sum;
}

// Y_0 and Y_1 by their ascending series.
void y01_series(cld z, cld j0, cld j1, cld& y0, cld& y1) {
  const cld half = z / 2.0L;
  const cld lg = std::log(half);
  const cld q = half * half;  // z^2/4

  // Y0 = (2/pi)(log(z/2)+gamma) J0 + (2/pi) sum_{k>=1} (-1)^{k+1} H_k q^k / (k!)^2
  {
    cld term = 1.0L;  // q^k / (k!)^2 with sign
    ld harmonic = 0.0L;
    cld sum = 0.0L;
    for (int k = 1; k < 400; ++k) {
      term *= -q / (static_cast<ld>(k) * static_cast<ld>(k));
      harmonic += 1.0L / static_cast<ld>(k);
      const cld add = -term * harmonic;  // (-1)^{k+1} = -(-1)^k
      sum += add;
      if (std::abs(add) <= 1e-22L * std::abs(sum) && k > std::abs(z)) break;
    }
    y0 = (2.0L / kPiL) * ((lg + kGammaL) * j0 + sum);
  }
  // Y1 = (2/pi) J1 log(z/2) - 2/(pi z)
  //      - (1/pi) sum_{k>=0} (psi(k+1)+psi(k+2)) (-q)^k (z/2) / (k!(k+1)!)
  {
    cld term = half;  // (-q)^k (z/2) / (k!(k+1)!)
    ld hk = 0.0L;     // H_k
    cld sum = term * (-2.0L * kGammaL + hk + (hk + 1.0L));
    for (int k = 1; k < 400; ++k) {
      term *= -q / (static_cast<ld>(k) * static_cast<ld>(k + 1));
      hk += 1.0L / static_cast<ld>(k);
      const ld hk1 = hk + 1.0L / static_cast<ld>(k + 1);
      const cld add = term * (-2.0L * kGammaL + hk + hk1);
      sum += add;
      if (std::abs(add) <= 1e-22L * std::abs(sum) && k > std::abs(z)) break;
    }
    y1 = (2.0L / kPiL) * j1 * lg - 2.0L / (kPiL * z) - sum / kPiL;
  }
}

// Hankel's asymptotic expansion for orders 0 and 1; returns H^(1) and H^(2).
void hankel_asymptotic(int nu, cplx z, cplx& h1, cplx& h2) {
  const double mu = 4.0 * nu * nu;
  const cplx inv = 1.0 / z;
  cplx sp = 1.0, sm = 1.0;
  cplx tp = 1.0, tm = 1.0;
  double prev = 1.0;
  for (int k = 1; k < 200; ++k) {
    const double odd = 2.0 * k - 1.0;
    const double f = (mu - odd * odd) / (8.0 * k);
    const cplx nt = tp * cplx(0.0, 1.0) * f * inv;
    const double mag = std::abs(nt);
    if (mag > prev) break;
    tp = nt;
    tm = tm * cplx(0.0, -1.0) * f * inv;
    sp += tp;
    sm += tm;
    prev = mag;
    if (mag < 1e-18) break;
  }
  const double pi = std::numbers::pi;
  const cplx pref = std::sqrt(2.0 / (pi * z));
  const cplx phase = z - nu * pi / 2.0 - pi / 4.0;
  const cplx i1(0.0, 1.0);
  h1 = pref * std::exp(i1 * phase) * sp;
  h2 = pref * std::exp(-i1 * phase) * sm;
}

// J_0 and J_1 by asymptotics, for |z| > kSeriesRadius.
void j01_large(cplx z, cplx& j0, cplx& j1) {
  cplx a, b;
  hankel_asymptotic(0, z, a, b);
  j0 = 0.5 * (a + b);
  hankel_asymptotic(1, z, a, b);
  j1 = 0.5 * (a + b);
}

// Miller backward recurrence for J_0..J_nmax at large |z|.
void j_miller(int nmax, cplx z, std::span<cplx> out) {
  const int start = std::max(nmax, static_cast<int>(std::abs(z))) + 60;
  std::vector<cplx> f(start + 2, cplx(0.0));
  f[start + 1] = 0.0;
  f[start] = 1e-30;
  for (int k = start; k >= 1; --k) {
    f[k - 1] = (2.0 * k / z) * f[k] - f[k + 1];
    if (std::abs(f[k - 1]) > 1e200) {
      for (int i = k - 1; i <= start; ++i) f[i] *= 1e-200;
    }
  }
  cplx j0, j1;
  j01_large(z, j0, j1);
  const cplx scale = (std::abs(j0) >= std::abs(j1)) ? j0 / f[0] : j1 / f[1];
  for (int k = 0; k <= nmax; ++k) out[k] = f[k] * scale;
}

void h01(cplx z, cplx& h0, cplx& h1) {
  if (std::abs(z) <= kSeriesRadius) {
    const cld zl(z.real(), z.imag());
    const cld j0 = j_series(0, zl);
    const cld j1 = j_series(1, zl);
    cld y0, y1;
    y01_series(zl, j0, j1, y0, y1);
    const cld i1(0.0L, 1.0L);
    const cld a = j0 + i1 * y0;
    const cld b = j1 + i1 * y1;
    h0 = cplx(static_cast<double>(a.real()), static_cast<double>(a.imag()));
    h1 = cplx(static_cast<double>(b.real()), static_cast<double>(b.imag()));
  } else {
    cplx dummy;
    hankel_asymptotic(0, z, h0, dummy);
    hankel_asymptotic(1, z, h1, dummy);
  }
}

}  // namespace

void bessel_j_range(int nmax, cplx z, std::span<cplx> out) {
  check_finite(z, "bessel_j");
  if (nmax < 0) return;
  if (z == cplx(0.0)) {
    out[0] = 1.0;
    for (int k = 1; k <= nmax; ++k) out[k] = 0.0;
    return;
  }
  if (std::abs(z) <= kSeriesRadius) {
    const cld zl(z.real(), z.imag());
    for (int k = 0; k <= nmax; ++k) {
      const cld v = j_series(k, zl);
      out[k] = cplx(static_cast<double>(v.real()), static_cast<double>(v.imag()));
    }
  } else {
    j_miller(nmax, z, out);
  }
}

void hankel1_range(int nmax, cplx z, std::span<cplx> out) {
  check_finite(z, "hankel1");
  if (z == cplx(0.0)) throw DomainError("hankel1: logarithmic singularity at z = 0");
  if (nmax < 0) return;
  cplx h0, h1;
  h01(z, h0, h1);
  out[0] = h0;
  if (nmax >= 1) out[1] = h1;
  for (int k = 1; k < nmax; ++k) out[k + 1] = (2.0 * k / z) * out[k] - out[k - 1];
}

std::vector<cplx> bessel_j_range(int nmax, cplx z) {
  std::vector<cplx> v(std::max(nmax + 1, 0));
  bessel_j_range(nmax, z, v);
  return v;
}

std::vector<cplx> hankel1_range(int nmax, cplx z) {
  std::vector<cplx> v(std::max(nmax + 1, 0));
  hankel1_range(nmax, z, v);
  return v;
}

cplx bessel_j(int n, cplx z) {
  check_finite(z, "bessel_j");
  const int a = std::abs(n);
  const double sgn = n < 0 ? sign_of_order(a) : 1.0;
  if (z == cplx(0.0)) return a == 0 ? 1.0 : 0.0;
  if (std::abs(z) <= kSeriesRadius) {
    const cld v = j_series(a, cld(z.real(), z.imag()));
    return sgn * cplx(static_cast<double>(v.real()), static_cast<double>(v.imag()));
  }
  std::vector<cplx> v(a + 1);
  j_miller(a, z, v);
  return sgn * v[a];
}

cplx hankel1(int n, cplx z) {
  const int a = std::abs(n);
  const double sgn = n < 0 ? sign_of_order(a) : 1.0;
  std::vector<cplx> v(a + 1);
  hankel1_range(a, z, v);
  return sgn * v[a];
}

cplx bessel_y(int n, cplx z) {
  const cplx h = hankel1(n, z);
  const cplx j = bessel_j(n, z);
  return (h - j) / cplx(0.0, 1.0);
}

cplx bessel_j_prime(int n, cplx z) { return 0.5 * (bessel_j(n - 1, z) - bessel_j(n + 1, z)); }

cplx hankel1_prime(int n, cplx z) { return 0.5 * (hankel1(n - 1, z) - hankel1(n + 1, z)); }

}  // namespace subres::specfun
