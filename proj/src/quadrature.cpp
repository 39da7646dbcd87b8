#include "subres/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "subres/errors.hpp"
#include "subres/fft.hpp"
#include "subres/kernels.hpp"

namespace subres::quad {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * kPi;

double log_2sin_half(double t) { return std::log(std::abs(2.0 * std::sin(0.5 * t))); }

double wrapped_offset(int p, int q, int Q) { return kTwoPi * dft_bin(q - p, Q) / Q; }

// Graded composite rule on (0, 2pi) for integrands with a log singularity at
// both endpoints: uniform interior panels plus dyadic panels toward each end.
// The two innermost intervals of width `tail` are left to the caller, since
// their nodes would collide with the singular point in floating point.
struct GradedRule {
  std::vector<double> t, w;
  double tail = 0.0;
  GradedRule() {
    std::vector<double> gx, gw;
    gauss_legendre(20, gx, gw);
    const int panels = 64;
    const int levels = 44;
    const double h = kTwoPi / panels;
    auto add = [&](double a, double b) {
      const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
      for (std::size_t i = 0; i < gx.size(); ++i) {
        t.push_back(mid + half * gx[i]);
        w.push_back(half * gw[i]);
      }
    };
    for (int p = 1; p < panels - 1; ++p) add(p * h, (p + 1) * h);
    double hi = h;
    for (int l = 0; l < levels; ++l) {
      const double lo = 0.5 * hi;
      add(lo, hi);
      add(kTwoPi - hi, kTwoPi - lo);
      hi = lo;
    }
    tail = hi;
  }
};

const GradedRule& graded_rule() {
  static const GradedRule rule;
  return rule;
}

}  // namespace

double PeriodicGrid::node(int q) const { return kTwoPi * q / Q; }
double PeriodicGrid::weight() const { return kTwoPi / Q; }

std::vector<CurveSample> sample_curve(const BoundaryCurve& c, int Q) {
  std::vector<CurveSample> out(Q);
  const PeriodicGrid g{Q};
  for (int q = 0; q < Q; ++q) out[q] = c.eval(g.node(q));
  return out;
}

void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = w[n - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
}

CMatrix galerkin_from_samples(CMatrix H, int F) {
  const int Q = static_cast<int>(H.rows());
  if (H.cols() != Q) throw InvalidArgument("galerkin_from_samples: square sample matrix expected");
  if (2 * F + 1 > Q) throw ParameterError("galerkin_from_samples: 2F+1 exceeds the grid size");
  fft::dft2(H, true);
  const double scale = (kTwoPi / Q) * (kTwoPi / Q);
  CMatrix E(2 * F + 1, 2 * F + 1);
  for (int m = -F; m <= F; ++m)
    for (int n = -F; n <= F; ++n) E(mode_index(m, F), mode_index(n, F)) = scale * H(dft_bin(m, Q), dft_bin(-n, Q));
  return E;
}

CMatrix smooth_block_galerkin(const std::vector<CurveSample>& si, const std::vector<CurveSample>& sj,
                              const Kernel& k, int F, bool diagonal, Execution exec) {
  const int Q = static_cast<int>(si.size());
  if (static_cast<int>(sj.size()) != Q) throw InvalidArgument("smooth_block_galerkin: grid size mismatch");
  if (4 * F > Q - 16) {
    throw ParameterError("smooth_block_galerkin: F = " + std::to_string(F) + " exceeds Q/4 - 4 for Q = " +
                         std::to_string(Q));
  }
  CMatrix H(Q, Q);
#pragma omp parallel for schedule(static) if (exec == Execution::parallel)
  for (int q = 0; q < Q; ++q) {
    for (int p = 0; p < Q; ++p) {
      const double t = diagonal ? wrapped_offset(p, q, Q) : -1.0;
      H(p, q) = k(si[p], sj[q], t) * (si[p].speed * sj[q].speed);
    }
  }
  return galerkin_from_samples(std::move(H), F);
}

CMatrix smooth_block_galerkin(const BoundaryCurve& ci, const BoundaryCurve& cj, const Kernel& k, int F, int Q,
                              Execution exec) {
  return smooth_block_galerkin(sample_curve(ci, Q), sample_curve(cj, Q), k, F, &ci == &cj, exec);
}

CMatrix km_log_diagonal(const CMatrix& A, const CMatrix& B, int F) {
  const int Q = static_cast<int>(A.rows());
  if (A.cols() != Q || B.rows() != Q || B.cols() != Q) throw InvalidArgument("km_log_diagonal: shape mismatch");
  if (Q < 4 * F + 16) {
    throw ParameterError("km_log_diagonal: Q = " + std::to_string(Q) + " below 4F + 16 for F = " + std::to_string(F));
  }
  CMatrix E = galerkin_from_samples(B, F);
  CMatrix Ahat = A;
  fft::dft2(Ahat, true);
  Ahat /= static_cast<double>(Q) * Q;
  const int lim = Q / 2 - 1;
  for (int m = -F; m <= F; ++m) {
    for (int n = -F; n <= F; ++n) {
      cplx sum = 0.0;
      for (int k = -lim - F; k <= lim + F; ++k) {
        if (k == 0) continue;
        const int a = m + k, b = -n - k;
        if (std::abs(a) > lim || std::abs(b) > lim) continue;
        sum += (-0.5 / std::abs(k)) * Ahat(dft_bin(a, Q), dft_bin(b, Q));
      }
      E(mode_index(m, F), mode_index(n, F)) += kTwoPi * kTwoPi * sum;
    }
  }
  return E;
}

CMatrix km_log_diagonal(const BoundaryCurve& c, const SplitKernel& k, int F, int Q, Execution exec) {
  if (Q < 4 * F + 16) {
    throw ParameterError("km_log_diagonal: Q = " + std::to_string(Q) + " below 4F + 16 for F = " + std::to_string(F));
  }
  const auto s = sample_curve(c, Q);
  CMatrix A(Q, Q), B(Q, Q);
#pragma omp parallel for schedule(static) if (exec == Execution::parallel)
  for (int q = 0; q < Q; ++q) {
    for (int p = 0; p < Q; ++p) {
      const double t = wrapped_offset(p, q, Q);
      const double jac = s[p].speed * s[q].speed;
      A(p, q) = k.log_coeff(s[p], s[q], t) * jac;
      B(p, q) = k.remainder(s[p], s[q], t) * jac;
    }
  }
  return km_log_diagonal(A, B, F);
}

CMatrix tff_diagonal(const BoundaryCurve& c, const Kernel& f, const std::function<double(double, double)>& g,
                     int F, int F_n, int q, Execution exec) {
  if (!(q > F_n)) throw ParameterError("tff_diagonal: q must exceed F_n (b > 1)");
  if (q < 4 * F) throw ParameterError("tff_diagonal: q must be at least 4F");
  if (F_n < 1) throw ParameterError("tff_diagonal: F_n must be positive");
  const auto& rule = graded_rule();
  const std::size_t nodes = rule.t.size();
  std::vector<cplx> rot(nodes);
  for (std::size_t l = 0; l < nodes; ++l) rot[l] = std::polar(1.0, -rule.t[l]);

  const auto s = sample_curve(c, q);
  CMatrix H(q, q);
#pragma omp parallel for schedule(static) if (exec == Execution::parallel)
  for (int p = 0; p < q; ++p) {
    const double theta = kTwoPi * p / q;
    std::vector<cplx> pw(nodes, cplx(1.0));
    std::vector<double> gw(nodes);
    for (std::size_t l = 0; l < nodes; ++l) gw[l] = g(theta, theta + rule.t[l]) * rule.w[l] / kTwoPi;
    // int_0^h log(c t) dt = h (log(c h) - 1) on each innermost interval, where
    // the oscillatory factor is 1 to within k h.
    const double tail = rule.tail / kTwoPi *
                        (g(theta, theta + rule.tail) + g(theta, theta + kTwoPi - rule.tail) - 2.0);
    // Row coefficients in the offset variable t = phi - theta; g is real.
    std::vector<cplx> row(q, cplx(0.0));
    for (int k = 0; k <= F_n; ++k) {
      cplx Ik = tail;
      for (std::size_t l = 0; l < nodes; ++l) {
        Ik += gw[l] * pw[l];
        pw[l] *= rot[l];
      }
      row[dft_bin(k, q)] += Ik;
      if (k > 0) row[dft_bin(-k, q)] += std::conj(Ik);
    }
    fft::dft(row, false);
    for (int j = 0; j < q; ++j) {
      const double t = wrapped_offset(p, j, q);
      H(p, j) = f(s[p], s[j], t) * (s[p].speed * s[j].speed) * row[dft_bin(j - p, q)];
    }
  }
  return galerkin_from_samples(std::move(H), F);
}

std::function<double(double, double)> half_log_distance(const BoundaryCurve& c) {
  return [&c](double theta, double phi) { return std::log(0.5 * (c.point(theta) - c.point(phi)).norm()); };
}

SplitKernel single_layer_split(cplx omega) {
  SplitKernel k;
  k.log_coeff = [omega](const CurveSample& x, const CurveSample& y, double t) -> cplx {
    if (t == 0.0) return -1.0 / kTwoPi;
    return -specfun::bessel_j(0, omega * (x.point - y.point).norm()) / kTwoPi;
  };
  k.remainder = [omega](const CurveSample& x, const CurveSample& y, double t) -> cplx {
    if (t == 0.0) {
      return cplx(0.0, 0.25) - (std::log(omega * x.speed / 2.0) + kernels::kGamma) / kTwoPi;
    }
    const double r = (x.point - y.point).norm();
    return kernels::phi_omega(omega, x.point, y.point) +
           specfun::bessel_j(0, omega * r) / kTwoPi * log_2sin_half(t);
  };
  return k;
}

SplitKernel adjoint_double_layer_split(cplx omega) {
  SplitKernel k;
  k.log_coeff = [omega](const CurveSample& x, const CurveSample& y, double t) -> cplx {
    if (t == 0.0) return 0.0;
    const Vec2 d = x.point - y.point;
    const double r = d.norm();
    return omega / kTwoPi * specfun::bessel_j(1, omega * r) * (d.dot(x.normal) / r);
  };
  k.remainder = [omega](const CurveSample& x, const CurveSample& y, double t) -> cplx {
    if (t == 0.0) return x.second.dot(x.normal) / (4.0 * kPi * x.speed * x.speed);
    const Vec2 d = x.point - y.point;
    const double r = d.norm();
    const cplx a = omega / kTwoPi * specfun::bessel_j(1, omega * r) * (d.dot(x.normal) / r);
    return kernels::dnu_phi_omega(omega, x.point, y.point, x.normal) - a * log_2sin_half(t);
  };
  return k;
}

SplitKernel dnu_g2_split() {
  // d/dnu G2 = f (log(r/2) + 4 pi c_gamma), f = (x-y).nu / (4 pi)
  const cplx c = 4.0 * kPi * kernels::c_gamma;
  SplitKernel k;
  k.log_coeff = [](const CurveSample& x, const CurveSample& y, double) -> cplx {
    return (x.point - y.point).dot(x.normal) / (4.0 * kPi);
  };
  k.remainder = [c](const CurveSample& x, const CurveSample& y, double t) -> cplx {
    if (t == 0.0) return 0.0;
    const Vec2 d = x.point - y.point;
    const double f = d.dot(x.normal) / (4.0 * kPi);
    return f * (std::log(d.norm() / (2.0 * std::abs(2.0 * std::sin(0.5 * t)))) + c);
  };
  return k;
}

Kernel dnu_g0_kernel() {
  return [](const CurveSample& x, const CurveSample& y, double t) -> cplx {
    if (t == 0.0) return x.second.dot(x.normal) / (4.0 * kPi * x.speed * x.speed);
    return kernels::dnu_g_k(0, x.point, y.point, x.normal);
  };
}

Kernel dnu_g1_kernel() {
  return [](const CurveSample& x, const CurveSample& y, double) -> cplx {
    return (x.point - y.point).dot(x.normal) / (4.0 * kPi);
  };
}

CMatrix dnu_g2_diagonal_km(const BoundaryCurve& c, int F, int Q, Execution exec) {
  return km_log_diagonal(c, dnu_g2_split(), F, Q, exec);
}

CMatrix dnu_g2_diagonal_tff(const BoundaryCurve& c, int F, int F_n, int q, Execution exec) {
  const Kernel f = [](const CurveSample& x, const CurveSample& y, double) -> cplx {
    return (x.point - y.point).dot(x.normal) / (4.0 * kPi);
  };
  const cplx c0 = 4.0 * kPi * kernels::c_gamma;
  CMatrix E = tff_diagonal(c, f, half_log_distance(c), F, F_n, q, exec);
  const auto s = sample_curve(c, q);
  CMatrix H(q, q);
  for (int j = 0; j < q; ++j)
    for (int p = 0; p < q; ++p) H(p, j) = c0 * f(s[p], s[j], 0.0) * (s[p].speed * s[j].speed);
  return E + galerkin_from_samples(std::move(H), F);
}

}  // namespace subres::quad
