#pragma once

#include "subres/assembly_full.hpp"
#include "subres/common.hpp"
#include "subres/geometry.hpp"

namespace subres {

/// How the log-singular diagonal blocks of K2 are integrated on non-circles.
enum class DiagonalMethod { kussmaul_martensen, fourier_filtering };

/// Reduced Galerkin matrices in the normalized basis e^{in theta}/sqrt|dD_j|,
/// each N(2F+1) square and independent of omega.
struct EffectiveMatrices {
  int N = 0;
  int F = 0;
  CMatrix C0;    // -1/2 G - K0' with K0' the normal derivative of G0
  CMatrix K1;    // normal derivative of G1
  CMatrix K2;    // normal derivative of G2
  CMatrix gram;  // arclength mass matrix (identity for circles)
  int modes() const { return 2 * F + 1; }
  int row(int i, int m) const { return i * modes() + (m + F); }
};

EffectiveMatrices assemble_effective(const ResonatorSystem& sys, Execution exec = Execution::serial,
                                     AssemblyPath path = AssemblyPath::automatic,
                                     DiagonalMethod diag = DiagonalMethod::kussmaul_martensen);

/// R_F(omega, delta) = (1 - delta) C0 - delta G - omega^2 log(omega) K1 - omega^2 K2.
CMatrix compose_RF(const EffectiveMatrices& eff, cplx omega, double delta);

/// Constant-mode (F = 0) capacitance data.
struct Capacitance {
  CMatrix K1_0;  // (1/2pi) v1 w1^T
  CMatrix K2_0;
  RVector v1;    // |D_i| / sqrt|dD_i|
  RVector w1;    // sqrt|dD_i|
  double mu1 = 0.0;  // (1/2pi) sum |D_i|
};

/// K1_0 in closed form; K2_0 from the constant-mode rows and columns of K2.
Capacitance capacitance_F0(const ResonatorSystem& sys, const EffectiveMatrices& eff);
Capacitance capacitance_F0(const ResonatorSystem& sys);

}  // namespace subres
