#include "subres/assembly_effective.hpp"

#include <cmath>
#include <numbers>

#include "subres/errors.hpp"
#include "subres/kernels.hpp"
#include "subres/quadrature.hpp"

namespace subres {
namespace {

constexpr double kPi = std::numbers::pi;

cplx k2_circle_symbol(int m, double a) {
  const cplx lg(std::log(a / 2.0) + kernels::kGamma, -0.5 * kPi);
  const int am = std::abs(m);
  if (am == 0) return 0.5 * a * a * lg;
  if (am == 1) return -0.25 * a * a * lg - a * a / 16.0;
  return a * a / (4.0 * am * (am * am - 1.0));
}

double k1_circle_symbol(int m, double a) {
  const int am = std::abs(m);
  if (am == 0) return 0.5 * a * a;
  if (am == 1) return -0.25 * a * a;
  return 0.0;
}

const quad::Kernel& neg_dnu_g0() {
  static const quad::Kernel k = [](const CurveSample& x, const CurveSample& y, double t) -> cplx {
    return -quad::dnu_g0_kernel()(x, y, t);
  };
  return k;
}

const quad::Kernel& dnu_g2_offdiag() {
  static const quad::Kernel k = [](const CurveSample& x, const CurveSample& y, double) -> cplx {
    return kernels::dnu_g_k(2, x.point, y.point, x.normal);
  };
  return k;
}

}  // namespace

EffectiveMatrices assemble_effective(const ResonatorSystem& sys, Execution exec, AssemblyPath path,
                                     DiagonalMethod diag) {
  const int N = sys.size(), F = sys.F, M = sys.modes(), Q = sys.Q;
  bool closed = sys.all_circles() && path != AssemblyPath::quadrature;
  if (path == AssemblyPath::closed_form && !sys.all_circles()) {
    throw UnsupportedError("closed-form effective assembly requires circular resonators");
  }
  EffectiveMatrices eff;
  eff.N = N;
  eff.F = F;
  eff.C0 = CMatrix::Zero(N * M, N * M);
  eff.K1 = CMatrix::Zero(N * M, N * M);
  eff.K2 = CMatrix::Zero(N * M, N * M);

  const CMatrix gram = gram_matrix(sys);
  std::vector<double> per(N);
  for (int i = 0; i < N; ++i) per[i] = sys.curves[i].perimeter();
  // Circles get the exact perimeter so the normalized Gram block is exactly I.
  for (int i = 0; i < N; ++i)
    if (sys.curves[i].kind() == CurveKind::circle) per[i] = 2.0 * kPi * sys.curves[i].radius();

  const auto g1 = quad::dnu_g1_kernel();
#pragma omp parallel for schedule(dynamic) if (exec == Execution::parallel)
  for (int p = 0; p < N * N; ++p) {
    const int i = p / N, j = p % N;
    const auto& ci = sys.curves[i];
    const auto& cj = sys.curves[j];
    auto C0 = eff.C0.block(i * M, j * M, M, M);
    auto K1 = eff.K1.block(i * M, j * M, M, M);
    auto K2 = eff.K2.block(i * M, j * M, M, M);
    if (i != j) {
      C0 = quad::smooth_block_galerkin(ci, cj, neg_dnu_g0(), F, Q);
      K1 = quad::smooth_block_galerkin(ci, cj, g1, F, Q);
      K2 = quad::smooth_block_galerkin(ci, cj, dnu_g2_offdiag(), F, Q);
    } else if (closed) {
      const double a = ci.radius();
      const double P = 2.0 * kPi * a;  // unnormalized entry = perimeter x symbol
      for (int m = -F; m <= F; ++m) {
        C0(m + F, m + F) = m == 0 ? 0.0 : -0.5 * P;
        K1(m + F, m + F) = P * k1_circle_symbol(m, a);
        K2(m + F, m + F) = P * k2_circle_symbol(m, a);
      }
    } else {
      C0 = -0.5 * gram.block(i * M, i * M, M, M) + quad::smooth_block_galerkin(ci, ci, neg_dnu_g0(), F, Q);
      K1 = quad::smooth_block_galerkin(ci, ci, g1, F, Q);
      K2 = diag == DiagonalMethod::kussmaul_martensen ? quad::dnu_g2_diagonal_km(ci, F, Q)
                                                       : quad::dnu_g2_diagonal_tff(ci, F, Q / 2, Q);
    }
  }
  // Normalize: entry / sqrt(|dD_i| |dD_j|).
  RVector scale(N * M);
  for (int i = 0; i < N; ++i) scale.segment(i * M, M).setConstant(1.0 / std::sqrt(per[i]));
  const auto normalize = [&](CMatrix& X) { X = scale.asDiagonal() * X * scale.asDiagonal(); };
  normalize(eff.C0);
  normalize(eff.K1);
  normalize(eff.K2);
  eff.gram = gram;
  normalize(eff.gram);
  if (closed) eff.gram.setIdentity();

  // Constants lie in the kernel of the adjoint of C0: the (i, 0) rows vanish
  // identically. Quadrature leaves only roundoff there; clear it.
  for (int i = 0; i < N; ++i) eff.C0.row(eff.row(i, 0)).setZero();
  return eff;
}

CMatrix compose_RF(const EffectiveMatrices& eff, cplx omega, double delta) {
  if (omega == cplx(0.0)) throw DomainError("compose_RF: omega = 0");
  const cplx w2 = omega * omega;
  return (1.0 - delta) * eff.C0 - delta * eff.gram - w2 * std::log(omega) * eff.K1 - w2 * eff.K2;
}

Capacitance capacitance_F0(const ResonatorSystem& sys, const EffectiveMatrices& eff) {
  const int N = sys.size();
  Capacitance c;
  c.v1.resize(N);
  c.w1.resize(N);
  double total = 0.0;
  for (int i = 0; i < N; ++i) {
    const auto& cu = sys.curves[i];
    const double P = cu.kind() == CurveKind::circle ? 2.0 * kPi * cu.radius() : cu.perimeter();
    const double A = cu.kind() == CurveKind::circle ? kPi * cu.radius() * cu.radius() : cu.area();
    c.v1(i) = A / std::sqrt(P);
    c.w1(i) = std::sqrt(P);
    total += A;
  }
  c.mu1 = total / (2.0 * kPi);
  c.K1_0 = (c.v1 * c.w1.transpose() / (2.0 * kPi)).cast<cplx>();
  c.K2_0.resize(N, N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) c.K2_0(i, j) = eff.K2(eff.row(i, 0), eff.row(j, 0));
  return c;
}

Capacitance capacitance_F0(const ResonatorSystem& sys) { return capacitance_F0(sys, assemble_effective(sys)); }

}  // namespace subres
