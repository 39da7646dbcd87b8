#pragma once

#include <functional>
#include <vector>

#include "subres/common.hpp"
#include "subres/geometry.hpp"

namespace subres::quad {

/// Kernel on a pair of boundary samples, without arclength Jacobians.
/// `t` is phi - theta reduced to [0, 2 pi); on diagonal blocks t == 0 marks
/// coincident nodes, where the kernel must return its limit. Blocks between
/// distinct curves pass t = -1.
using Kernel = std::function<cplx(const CurveSample& x, const CurveSample& y, double t)>;

/// Kernel of the form A * log|2 sin(t/2)| + B with A, B smooth.
struct SplitKernel {
  Kernel log_coeff;
  Kernel remainder;
};

/// Equispaced periodic nodes theta_q = 2 pi q / Q.
struct PeriodicGrid {
  int Q;
  double node(int q) const;
  double weight() const;
};

std::vector<CurveSample> sample_curve(const BoundaryCurve& c, int Q);

/// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w);

/// Galerkin entries E(m, n) = (2pi/Q)^2 sum_pq e^{-i m theta_p} H(p, q) e^{i n phi_q}
/// for |m|, |n| <= F, read off one 2D FFT. H must already carry the Jacobians.
CMatrix galerkin_from_samples(CMatrix H, int F);

/// Block between two curves (or a diagonal block with a smooth kernel) by the
/// tensor trapezoidal rule. Throws ParameterError when F > Q/4 - 4.
CMatrix smooth_block_galerkin(const BoundaryCurve& ci, const BoundaryCurve& cj, const Kernel& k, int F, int Q,
                              Execution exec = Execution::serial);
CMatrix smooth_block_galerkin(const std::vector<CurveSample>& si, const std::vector<CurveSample>& sj,
                              const Kernel& k, int F, bool diagonal, Execution exec = Execution::serial);

/// Diagonal block of a log-singular kernel by Kussmaul-Martensen splitting:
/// trapezoidal rule on the remainder plus exact convolution of the log
/// coefficient with the Fourier series of log|2 sin(t/2)|.
/// Throws ParameterError when Q < 4F + 16.
CMatrix km_log_diagonal(const BoundaryCurve& c, const SplitKernel& k, int F, int Q,
                        Execution exec = Execution::serial);
/// Same from sampled A, B (Jacobians included), both Q x Q.
CMatrix km_log_diagonal(const CMatrix& A, const CMatrix& B, int F);

/// Diagonal block of f(theta, phi) * g(theta, phi) by truncated Fourier
/// filtering: each row of g is replaced by its F_n-term Fourier projection
/// (coefficients by graded Gauss-Legendre quadrature toward phi = theta), then
/// the product is integrated by the q-point trapezoidal rule.
/// f excludes Jacobians; g may have an integrable singularity at phi = theta.
/// Throws ParameterError unless q > F_n and q >= 4F.
CMatrix tff_diagonal(const BoundaryCurve& c, const Kernel& f, const std::function<double(double, double)>& g,
                     int F, int F_n, int q, Execution exec = Execution::serial);

/// log(|x(theta) - x(phi)| / 2) on one curve.
std::function<double(double, double)> half_log_distance(const BoundaryCurve& c);

// Split forms of the kernels needed on diagonal blocks.

/// Phi_omega = (i/4) H0(omega r).
SplitKernel single_layer_split(cplx omega);
/// d/dnu_x Phi_omega.
SplitKernel adjoint_double_layer_split(cplx omega);
/// d/dnu_x G2.
SplitKernel dnu_g2_split();

/// d/dnu_x G0 with its coincident-point limit (smooth on one curve).
Kernel dnu_g0_kernel();
/// d/dnu_x G1 (smooth, zero on the diagonal).
Kernel dnu_g1_kernel();

/// Diagonal block of the d/dnu G2 operator by splitting and by filtering.
CMatrix dnu_g2_diagonal_km(const BoundaryCurve& c, int F, int Q, Execution exec = Execution::serial);
CMatrix dnu_g2_diagonal_tff(const BoundaryCurve& c, int F, int F_n, int q, Execution exec = Execution::serial);

}  // namespace subres::quad
