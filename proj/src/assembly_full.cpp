#include "subres/assembly_full.hpp"

#include <cmath>
#include <numbers>

#include "subres/errors.hpp"
#include "subres/fft.hpp"
#include "subres/kernels.hpp"
#include "subres/quadrature.hpp"

namespace subres {
namespace {

constexpr double kPi = std::numbers::pi;
const cplx kI(0.0, 1.0);

// J, J', H, H' at z for orders -F..F (index m + F).
struct ModeTable {
  std::vector<cplx> J, Jp, H, Hp;
};

ModeTable mode_table(int F, cplx z) {
  const auto j = specfun::bessel_j_range(F + 1, z);
  const auto h = specfun::hankel1_range(F + 1, z);
  ModeTable t;
  t.J.resize(2 * F + 1);
  t.Jp.resize(2 * F + 1);
  t.H.resize(2 * F + 1);
  t.Hp.resize(2 * F + 1);
  for (int m = 0; m <= F; ++m) {
    const cplx jp = m == 0 ? -j[1] : 0.5 * (j[m - 1] - j[m + 1]);
    const cplx hp = m == 0 ? -h[1] : 0.5 * (h[m - 1] - h[m + 1]);
    const double s = (m % 2 == 0) ? 1.0 : -1.0;
    t.J[F + m] = j[m];
    t.J[F - m] = s * j[m];
    t.Jp[F + m] = jp;
    t.Jp[F - m] = s * jp;
    t.H[F + m] = h[m];
    t.H[F - m] = s * h[m];
    t.Hp[F + m] = hp;
    t.Hp[F - m] = s * hp;
  }
  return t;
}

// h_k = H_k(omega d) e^{i k alpha} for k in [-2F, 2F] (index k + 2F), with
// c_i - c_j = d e^{i alpha}.
std::vector<cplx> graf_sequence(const BoundaryCurve& ci, const BoundaryCurve& cj, cplx omega, int F) {
  const Vec2 diff = ci.center() - cj.center();
  const double d = diff.norm();
  const double alpha = std::atan2(diff.y(), diff.x());
  const auto h = specfun::hankel1_range(2 * F, omega * d);
  std::vector<cplx> out(4 * F + 1);
  for (int k = -2 * F; k <= 2 * F; ++k) {
    const int a = std::abs(k);
    const double s = (k < 0 && a % 2 == 1) ? -1.0 : 1.0;
    out[k + 2 * F] = s * h[a] * std::polar(1.0, k * alpha);
  }
  return out;
}

void check_omega(cplx omega) {
  if (omega == cplx(0.0)) throw DomainError("full system: omega = 0");
  if (!std::isfinite(omega.real()) || !std::isfinite(omega.imag())) throw InvalidArgument("full system: non-finite omega");
}

bool use_closed_form(const ResonatorSystem& sys, AssemblyPath path) {
  if (path == AssemblyPath::quadrature) return false;
  if (!sys.all_circles()) {
    if (path == AssemblyPath::closed_form) throw UnsupportedError("closed-form assembly requires circular resonators");
    return false;
  }
  return true;
}

struct CircleDiag {
  std::vector<cplx> S, Kp, Tint, Text;
};

CircleDiag circle_diagonal(const ModeTable& t, double a, cplx omega, int F) {
  CircleDiag d;
  const cplx pre = kI * kPi * kPi * a * a;
  for (int k = 0; k < 2 * F + 1; ++k) {
    d.S.push_back(pre * t.J[k] * t.H[k]);
    d.Kp.push_back(0.5 * pre * omega * (t.J[k] * t.Hp[k] + t.Jp[k] * t.H[k]));
    d.Tint.push_back(pre * omega * t.H[k] * t.Jp[k]);
    d.Text.push_back(pre * omega * t.J[k] * t.Hp[k]);
  }
  return d;
}

// Coupling blocks between circles i != j from Graf's addition theorem.
void graf_blocks(const BoundaryCurve& ci, const BoundaryCurve& cj, const ModeTable& ti, const ModeTable& tj,
                 cplx omega, int F, Eigen::Ref<CMatrix> S, Eigen::Ref<CMatrix> Kp) {
  const auto h = graf_sequence(ci, cj, omega, F);
  const cplx pre = kI * kPi * kPi * ci.radius() * cj.radius();
  for (int m = -F; m <= F; ++m) {
    for (int n = -F; n <= F; ++n) {
      const cplx core = pre * tj.J[n + F] * h[n - m + 2 * F];
      S(m + F, n + F) = core * ti.J[m + F];
      Kp(m + F, n + F) = core * omega * ti.Jp[m + F];
    }
  }
}

CMatrix gram_block(const BoundaryCurve& c, int F, int Q) {
  const int M = 2 * F + 1;
  if (c.kind() == CurveKind::circle) return CMatrix::Identity(M, M) * (2.0 * kPi * c.radius());
  const auto s = quad::sample_curve(c, Q);
  CMatrix G(M, M);
  for (int m = -F; m <= F; ++m) {
    for (int n = -F; n <= F; ++n) {
      cplx sum = 0.0;
      for (int q = 0; q < Q; ++q) sum += std::polar(s[q].speed, (n - m) * 2.0 * kPi * q / Q);
      G(m + F, n + F) = sum * (2.0 * kPi / Q);
    }
  }
  return G;
}

int gram_points(const ResonatorSystem& sys) { return std::max({4 * sys.Q, 8 * sys.F + 64, 512}); }

// Layer blocks by generic quadrature for the (i, j) pair.
void quadrature_pair(const ResonatorSystem& sys, int i, int j, cplx omega, Eigen::Ref<CMatrix> S,
                     Eigen::Ref<CMatrix> Kp) {
  const auto& ci = sys.curves[i];
  const auto& cj = sys.curves[j];
  if (i == j) {
    S = quad::km_log_diagonal(ci, quad::single_layer_split(omega), sys.F, sys.Q);
    Kp = quad::km_log_diagonal(ci, quad::adjoint_double_layer_split(omega), sys.F, sys.Q);
    return;
  }
  const quad::Kernel ks = [omega](const CurveSample& x, const CurveSample& y, double) {
    return kernels::phi_omega(omega, x.point, y.point);
  };
  const quad::Kernel kk = [omega](const CurveSample& x, const CurveSample& y, double) {
    return kernels::dnu_phi_omega(omega, x.point, y.point, x.normal);
  };
  S = quad::smooth_block_galerkin(ci, cj, ks, sys.F, sys.Q);
  Kp = quad::smooth_block_galerkin(ci, cj, kk, sys.F, sys.Q);
}

}  // namespace

CMatrix gram_matrix(const ResonatorSystem& sys) {
  const int M = sys.modes();
  CMatrix G = CMatrix::Zero(sys.size() * M, sys.size() * M);
  for (int i = 0; i < sys.size(); ++i) G.block(i * M, i * M, M, M) = gram_block(sys.curves[i], sys.F, gram_points(sys));
  return G;
}

LayerBlocks assemble_layers(const ResonatorSystem& sys, cplx omega, Execution exec, AssemblyPath path) {
  check_omega(omega);
  const int N = sys.size(), F = sys.F, M = sys.modes();
  const bool closed = use_closed_form(sys, path);
  LayerBlocks L;
  L.S = CMatrix::Zero(N * M, N * M);
  L.Kp = CMatrix::Zero(N * M, N * M);
  L.gram = gram_matrix(sys);

  std::vector<ModeTable> tables;
  if (closed) {
    for (const auto& c : sys.curves) tables.push_back(mode_table(F, omega * c.radius()));
  }
#pragma omp parallel for schedule(dynamic) if (exec == Execution::parallel)
  for (int p = 0; p < N * N; ++p) {
    const int i = p / N, j = p % N;
    auto S = L.S.block(i * M, j * M, M, M);
    auto K = L.Kp.block(i * M, j * M, M, M);
    if (!closed) {
      quadrature_pair(sys, i, j, omega, S, K);
    } else if (i == j) {
      const auto d = circle_diagonal(tables[i], sys.curves[i].radius(), omega, F);
      for (int k = 0; k < M; ++k) {
        S(k, k) = d.S[k];
        K(k, k) = d.Kp[k];
      }
    } else {
      graf_blocks(sys.curves[i], sys.curves[j], tables[i], tables[j], omega, F, S, K);
    }
  }
  return L;
}

FullSystemMatrix assemble_A(const ResonatorSystem& sys, cplx omega, Execution exec, AssemblyPath path) {
  const bool closed = use_closed_form(sys, path);
  const LayerBlocks L = assemble_layers(sys, omega, exec, closed ? AssemblyPath::closed_form : AssemblyPath::quadrature);
  FullSystemMatrix out;
  out.omega = omega;
  out.delta = sys.delta;
  out.index = FullIndex{sys.size(), sys.F};
  const int h = out.index.half();
  CMatrix Tint = L.Kp + 0.5 * L.gram;
  CMatrix Text = L.Kp - 0.5 * L.gram;
  if (closed) {
    // Direct symbols avoid the cancellation in K' -+ 1/2 at small omega.
    const int M = sys.modes();
    for (int i = 0; i < sys.size(); ++i) {
      const double a = sys.curves[i].radius();
      const auto d = circle_diagonal(mode_table(sys.F, omega * a), a, omega, sys.F);
      for (int k = 0; k < M; ++k) {
        Tint(i * M + k, i * M + k) = d.Tint[k];
        Text(i * M + k, i * M + k) = d.Text[k];
      }
    }
  }
  out.A.resize(2 * h, 2 * h);
  out.A.topLeftCorner(h, h) = L.S;
  out.A.topRightCorner(h, h) = -L.S;
  out.A.bottomLeftCorner(h, h) = -Tint;
  out.A.bottomRightCorner(h, h) = sys.delta * Text;
  return out;
}

CVector apply_A_fast(const ResonatorSystem& sys, cplx omega, const CVector& x) {
  check_omega(omega);
  if (!sys.all_circles()) throw UnsupportedError("apply_A_fast: every resonator must be a circle");
  const FullIndex idx{sys.size(), sys.F};
  if (x.size() != idx.size()) throw InvalidArgument("apply_A_fast: vector length does not match the system");
  const int N = sys.size(), F = sys.F, M = sys.modes(), h = idx.half();
  int L = 1;
  while (L < 4 * F + 2) L *= 2;

  std::vector<ModeTable> tables;
  for (const auto& c : sys.curves) tables.push_back(mode_table(F, omega * c.radius()));

  const CVector x0 = x.head(h), x1 = x.tail(h);
  const CVector wS = x0 - x1;
  const CVector wK = -x0 + sys.delta * x1;
  CVector y = CVector::Zero(2 * h);

  for (int i = 0; i < N; ++i) {
    const auto d = circle_diagonal(tables[i], sys.curves[i].radius(), omega, F);
    for (int k = 0; k < M; ++k) {
      const int r = i * M + k;
      y(r) += d.S[k] * wS(r);
      y(h + r) += -d.Tint[k] * x0(r) + sys.delta * d.Text[k] * x1(r);
    }
  }
  if (N == 1) return y;

  // Coupling blocks: z_m = sum_n h_{n-m} u_n with u_n = J_n(omega a_j) w_j(n).
  // |H_k| grows factorially in |k|, so each half of the Toeplitz symbol is
  // balanced by a geometric weight rho^k before the FFT convolution; an
  // unbalanced product loses digits in proportion to max|h_k| / |h_0|.
  std::vector<cplx> zS(M), zK(M), g(L), a(L), b(L);
  for (int i = 0; i < N; ++i) {
    std::fill(zS.begin(), zS.end(), cplx(0.0));
    std::fill(zK.begin(), zK.end(), cplx(0.0));
    for (int j = 0; j < N; ++j) {
      if (i == j) continue;
      const auto hseq = graf_sequence(sys.curves[i], sys.curves[j], omega, F);
      const double growth =
          F > 0 ? std::pow(std::abs(hseq[4 * F]) / std::abs(hseq[2 * F]), 1.0 / (2.0 * F)) : 1.0;
      const double r = std::max(growth, 1.0);
      for (int side = 0; side < 2; ++side) {
        // side 0 carries k = n - m >= 0 with rho = r, side 1 carries k < 0 with rho = 1/r.
        const double rho = side == 0 ? r : 1.0 / r;
        std::fill(g.begin(), g.end(), cplx(0.0));
        for (int k = -2 * F; k <= 2 * F; ++k) {
          if ((side == 0) != (k >= 0)) continue;
          // convolution kernel g_{m-n} = h_{n-m} rho^{-(n-m)}
          g[dft_bin(-k, L)] = hseq[k + 2 * F] * std::pow(rho, -k);
        }
        fft::dft(g, true);
        std::fill(a.begin(), a.end(), cplx(0.0));
        std::fill(b.begin(), b.end(), cplx(0.0));
        for (int n = -F; n <= F; ++n) {
          const cplx wgt = tables[j].J[n + F] * std::pow(rho, n);
          a[n + F] = wgt * wS(j * M + n + F);
          b[n + F] = wgt * wK(j * M + n + F);
        }
        fft::dft(a, true);
        fft::dft(b, true);
        for (int q = 0; q < L; ++q) {
          a[q] *= g[q];
          b[q] *= g[q];
        }
        fft::dft(a, false);
        fft::dft(b, false);
        const double scale = kPi * kPi * sys.curves[i].radius() * sys.curves[j].radius() / L;
        for (int m = -F; m <= F; ++m) {
          const double un = std::pow(rho, -m) * scale;
          zS[m + F] += un * a[m + F];
          zK[m + F] += un * b[m + F];
        }
      }
    }
    for (int m = -F; m <= F; ++m) {
      const int r = i * M + m + F;
      y(r) += kI * tables[i].J[m + F] * zS[m + F];
      y(h + r) += kI * omega * tables[i].Jp[m + F] * zK[m + F];
    }
  }
  return y;
}

SingularTriplet smallest_singular(const CMatrix& A) {
  if (A.size() == 0) throw InvalidArgument("smallest_singular: empty matrix");
  if (!A.allFinite()) throw NumericalError("smallest_singular: matrix has non-finite entries");
  Eigen::BDCSVD<CMatrix> svd(A, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const int k = static_cast<int>(s.size()) - 1;
  if (!std::isfinite(s(k))) {
    throw NumericalError("smallest_singular: decomposition failed (largest singular value " + std::to_string(s(0)) + ")");
  }
  SingularTriplet t;
  t.sigma = s(k);
  t.u = svd.matrixU().col(k);
  t.v = svd.matrixV().col(k);
  return t;
}

}  // namespace subres
