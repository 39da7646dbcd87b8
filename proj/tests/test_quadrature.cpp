#include "test_main.hpp"

#include <cmath>
#include <numbers>

#include "subres/errors.hpp"
#include "subres/kernels.hpp"
#include "subres/quadrature.hpp"

using namespace subres;
using namespace subres::quad;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2 * kPi;
const cplx I1(0.0, 1.0);

// Direct double sum of the trapezoidal rule, no FFT.
CMatrix brute_trapezoid(const BoundaryCurve& ci, const BoundaryCurve& cj, const Kernel& k, int F, int Q) {
  const auto si = sample_curve(ci, Q), sj = sample_curve(cj, Q);
  const double h = kTwoPi / Q;
  CMatrix E = CMatrix::Zero(2 * F + 1, 2 * F + 1);
  for (int p = 0; p < Q; ++p) {
    CVector inner = CVector::Zero(2 * F + 1);
    for (int q = 0; q < Q; ++q) {
      const cplx v = k(si[p], sj[q], -1.0) * si[p].speed * sj[q].speed;
      for (int n = -F; n <= F; ++n) inner(n + F) += v * std::polar(1.0, n * q * h);
    }
    for (int m = -F; m <= F; ++m) E.row(m + F) += std::polar(1.0, -m * p * h) * inner.transpose();
  }
  return E * h * h;
}

double max_abs(const CMatrix& m) { return m.cwiseAbs().maxCoeff(); }

// dnu G2 diagonal symbol on a circle of radius a, in the unnormalized basis.
cplx dnu_g2_circle_entry(int m, double a) {
  const double lg = std::log(a / 2) + kernels::kGamma;
  cplx s;
  if (m == 0) {
    s = a * a / 2 * (lg - I1 * kPi / 2.0);
  } else if (std::abs(m) == 1) {
    s = -a * a / 4 * (lg - I1 * kPi / 2.0) - a * a / 16;
  } else {
    s = a * a / (4.0 * std::abs(m) * (m * m - 1.0));
  }
  return kTwoPi * a * s;
}

}  // namespace

TEST_CASE("constant kernel hits only the (0,0) entry") {
  const auto a = BoundaryCurve::circle({0, 0}, 1.0), b = BoundaryCurve::circle({3, 0}, 1.0);
  const Kernel one = [](const CurveSample&, const CurveSample&, double) -> cplx { return 1.0; };
  const CMatrix E = smooth_block_galerkin(a, b, one, 3, 32);
  CHECK(std::abs(E(3, 3) - kTwoPi * kTwoPi) < 1e-12);
  CMatrix rest = E;
  rest(3, 3) = 0.0;
  CHECK(max_abs(rest) < 1e-12);
}

TEST_CASE("test function is conjugated, trial function is not") {
  const auto a = BoundaryCurve::circle({0, 0}, 1.0), b = BoundaryCurve::circle({3, 0}, 1.0);
  const Kernel k = [](const CurveSample& x, const CurveSample& y, double) -> cplx {
    // e^{i theta} e^{-i phi} for unit circles centred at (0,0) and (3,0)
    return cplx(x.point.x(), x.point.y()) * std::conj(cplx(y.point.x() - 3.0, y.point.y()));
  };
  const CMatrix E = smooth_block_galerkin(a, b, k, 2, 32);
  CHECK(std::abs(E(2 + 1, 2 + 1) - kTwoPi * kTwoPi) < 1e-12);
  CMatrix rest = E;
  rest(3, 3) = 0.0;
  CHECK(max_abs(rest) < 1e-12);
}

TEST_CASE("off-diagonal block matches an oversampled direct oracle") {
  const auto a = BoundaryCurve::circle({0, 0}, 1.0), b = BoundaryCurve::circle({2.6, 0.4}, 1.0);
  const Kernel k = [](const CurveSample& x, const CurveSample& y, double) -> cplx {
    return kernels::dnu_g_k(1, x.point, y.point, x.normal);
  };
  const int F = 4, Q = 32;
  const CMatrix E = smooth_block_galerkin(a, b, k, F, Q);
  const CMatrix R = brute_trapezoid(a, b, k, F, 10 * Q);
  CHECK(max_abs(E - R) < 1e-12);

  const Kernel kw = [](const CurveSample& x, const CurveSample& y, double) -> cplx {
    return kernels::dnu_phi_omega(cplx(0.9, -0.05), x.point, y.point, x.normal);
  };
  const auto e = BoundaryCurve::ellipse({0, 0}, 1.4, 0.8, 0.3), s = BoundaryCurve::star({3.4, 0.5}, 1.0, 0.15, 4);
  const CMatrix Ew = smooth_block_galerkin(e, s, kw, F, 128);
  const CMatrix Rw = brute_trapezoid(e, s, kw, F, 640);
  CHECK(max_abs(Ew - Rw) < 1e-12 * max_abs(Rw));
}

TEST_CASE("off-diagonal error decays superalgebraically in Q") {
  const auto e = BoundaryCurve::ellipse({0, 0}, 1.4, 0.8, 0.3), s = BoundaryCurve::star({2.7, 0.0}, 1.0, 0.1, 3);
  const Kernel k = [](const CurveSample& x, const CurveSample& y, double) -> cplx {
    return kernels::phi_omega(cplx(0.5, 0.0), x.point, y.point);
  };
  const int F = 0;
  const CMatrix ref = smooth_block_galerkin(e, s, k, F, 256);
  std::vector<double> err;
  for (int Q : {16, 32, 64}) err.push_back(max_abs(smooth_block_galerkin(e, s, k, F, Q) - ref));
  CAPTURE(err[0]);
  CAPTURE(err[1]);
  CAPTURE(err[2]);
  CHECK(err[1] < err[0]);
  const double floor = 1e-13 * max_abs(ref);
  if (err[2] > floor) CHECK(err[2] / err[1] < err[1] / err[0]);
}

TEST_CASE("real kernel gives conjugate-symmetric entries") {
  const auto e = BoundaryCurve::ellipse({0, 0}, 1.4, 0.8, 0.3), s = BoundaryCurve::star({3.4, 0.5}, 1.0, 0.15, 4);
  const int F = 3;
  const CMatrix E = smooth_block_galerkin(e, s, dnu_g1_kernel(), F, 64);
  for (int m = -F; m <= F; ++m)
    for (int n = -F; n <= F; ++n) CHECK(std::abs(E(-m + F, -n + F) - std::conj(E(m + F, n + F))) < 1e-13);
  const CMatrix D = smooth_block_galerkin(s, s, dnu_g0_kernel(), F, 64);
  for (int m = -F; m <= F; ++m)
    for (int n = -F; n <= F; ++n) CHECK(std::abs(D(-m + F, -n + F) - std::conj(D(m + F, n + F))) < 1e-13);
}

TEST_CASE("parallel tabulation is bit-identical to serial") {
  const auto e = BoundaryCurve::ellipse({0, 0}, 1.4, 0.8, 0.3), s = BoundaryCurve::star({3.4, 0.5}, 1.0, 0.15, 4);
  const Kernel kw = [](const CurveSample& x, const CurveSample& y, double) -> cplx {
    return kernels::dnu_phi_omega(cplx(0.9, -0.05), x.point, y.point, x.normal);
  };
  const CMatrix a = smooth_block_galerkin(e, s, kw, 4, 64, Execution::serial);
  const CMatrix b = smooth_block_galerkin(e, s, kw, 4, 64, Execution::parallel);
  CHECK((a - b).cwiseAbs().maxCoeff() == 0.0);
  const CMatrix c = km_log_diagonal(e, dnu_g2_split(), 4, 64, Execution::serial);
  const CMatrix d = km_log_diagonal(e, dnu_g2_split(), 4, 64, Execution::parallel);
  CHECK((c - d).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("parameter guards") {
  const auto a = BoundaryCurve::circle({0, 0}, 1.0), b = BoundaryCurve::circle({3, 0}, 1.0);
  CHECK_THROWS_AS(smooth_block_galerkin(a, b, dnu_g1_kernel(), 5, 32), ParameterError);
  CHECK_NOTHROW(smooth_block_galerkin(a, b, dnu_g1_kernel(), 4, 32));
  CHECK_THROWS_AS(km_log_diagonal(a, dnu_g2_split(), 4, 30), ParameterError);
  CHECK_THROWS_AS(dnu_g2_diagonal_tff(a, 2, 64, 64), ParameterError);
}

TEST_CASE("Gauss-Legendre rule integrates polynomials exactly") {
  std::vector<double> x, w;
  gauss_legendre(20, x, w);
  for (int deg = 0; deg <= 39; ++deg) {
    double s = 0.0;
    for (int i = 0; i < 20; ++i) s += w[i] * std::pow(x[i], deg);
    const double exact = deg % 2 ? 0.0 : 2.0 / (deg + 1);
    CHECK(std::abs(s - exact) < 1e-14);
  }
}

TEST_CASE("splitting with zero kernel gives zero") {
  const auto e = BoundaryCurve::ellipse({0, 0}, 2.0, 1.0);
  const Kernel zero = [](const CurveSample&, const CurveSample&, double) -> cplx { return 0.0; };
  CHECK(max_abs(km_log_diagonal(e, SplitKernel{zero, zero}, 3, 64)) == 0.0);
}

TEST_CASE("dnu G2 circle diagonal matches the closed-form symbol") {
  for (double a : {1.0, 0.7}) {
    const auto c = BoundaryCurve::circle({0.3, -0.4}, a);
    const int F = 6;
    const CMatrix E = dnu_g2_diagonal_km(c, F, 8 * F + 32);
    for (int m = -F; m <= F; ++m) {
      for (int n = -F; n <= F; ++n) {
        const cplx expect = m == n ? dnu_g2_circle_entry(m, a) : cplx(0.0);
        CAPTURE(m);
        CAPTURE(n);
        CHECK(std::abs(E(m + F, n + F) - expect) < 1e-10);
      }
    }
  }
}

TEST_CASE("Helmholtz circle diagonals by splitting match Bessel symbols") {
  const double a = 1.3;
  const cplx w(0.7, -0.02);
  const auto c = BoundaryCurve::circle({1.0, 2.0}, a);
  const int F = 5;
  const CMatrix S = km_log_diagonal(c, single_layer_split(w), F, 64);
  const CMatrix K = km_log_diagonal(c, adjoint_double_layer_split(w), F, 64);
  const cplx z = w * a;
  for (int m = -F; m <= F; ++m) {
    const cplx j = specfun::bessel_j(m, z), h = specfun::hankel1(m, z);
    const cplx jp = specfun::bessel_j_prime(m, z), hp = specfun::hankel1_prime(m, z);
    const cplx s_sym = I1 * kPi * a / 2.0 * j * h;
    const cplx k_sym = I1 * kPi * w * a / 4.0 * (j * hp + jp * h);
    CAPTURE(m);
    CHECK(std::abs(S(m + F, m + F) - kTwoPi * a * s_sym) < 1e-11);
    CHECK(std::abs(K(m + F, m + F) - kTwoPi * a * k_sym) < 1e-11);
  }
  CMatrix off = S;
  off.diagonal().setZero();
  CHECK(max_abs(off) < 1e-12);
}

TEST_CASE("dnu G0 on a circle is -1/2 on constants") {
  const double a = 0.8;
  const auto c = BoundaryCurve::circle({0, 0}, a);
  const int F = 3;
  const CMatrix E = smooth_block_galerkin(c, c, dnu_g0_kernel(), F, 32);
  CHECK(std::abs(E(F, F) - kTwoPi * a * (-0.5)) < 1e-13);
  CMatrix rest = E;
  rest(F, F) = 0.0;
  CHECK(max_abs(rest) < 1e-13);
}

TEST_CASE("ellipse dnu G2 (0,0) entry converges fast in Q") {
  const auto e = BoundaryCurve::ellipse({0, 0}, 2.0, 1.0);
  const cplx ref = dnu_g2_diagonal_km(e, 2, 1024)(2, 2);
  std::vector<double> err;
  for (int Q : {64, 128, 256}) err.push_back(std::abs(dnu_g2_diagonal_km(e, 2, Q)(2, 2) - ref));
  CAPTURE(err[0]);
  CAPTURE(err[1]);
  CAPTURE(err[2]);
  CHECK(err[1] < 1e-3 * err[0] + 1e-13);
  CHECK(err[2] < 1e-12);
}

TEST_CASE("filtering a smooth factor reproduces the trapezoidal rule") {
  const auto e = BoundaryCurve::ellipse({0, 0}, 2.0, 1.0, 0.2);
  const auto g = [](double th, double ph) { return std::cos(th - 2 * ph) + 0.3 * std::sin(3 * ph); };
  const Kernel f = [](const CurveSample& x, const CurveSample& y, double) -> cplx {
    return 1.0 + 0.1 * x.point.x() * y.point.y();
  };
  const int F = 3, q = 64;
  const CMatrix T = tff_diagonal(e, f, g, F, 16, q);
  const auto s = sample_curve(e, q);
  CMatrix H(q, q);
  for (int p = 0; p < q; ++p)
    for (int j = 0; j < q; ++j)
      H(p, j) = f(s[p], s[j], 0.0) * g(kTwoPi * p / q, kTwoPi * j / q) * s[p].speed * s[j].speed;
  CHECK(max_abs(T - galerkin_from_samples(H, F)) < 1e-12);
}

TEST_CASE("filtering and splitting agree on the dnu G2 diagonal") {
  const std::vector<BoundaryCurve> curves{BoundaryCurve::circle({0, 0}, 1.0), BoundaryCurve::ellipse({0, 0}, 2.0, 1.0, 0.4),
                                          BoundaryCurve::star({1, 1}, 1.0, 0.15, 5)};
  const int F = 4;
  for (const auto& c : curves) {
    const CMatrix km = dnu_g2_diagonal_km(c, F, 256);
    const CMatrix tf = dnu_g2_diagonal_tff(c, F, 128, 256);
    CAPTURE(to_string(c.kind()));
    CHECK(max_abs(km - tf) < 1e-8);
  }
}

TEST_CASE("filtered log-distance converges faster than any fixed power") {
  const auto e = BoundaryCurve::ellipse({0, 0}, 2.0, 1.0, 0.1);
  const Kernel one = [](const CurveSample&, const CurveSample&, double) -> cplx { return 1.0; };
  const auto g = half_log_distance(e);
  const int F = 2;
  const CMatrix ref = tff_diagonal(e, one, g, F, 256, 512);
  std::vector<double> err;
  for (int fn : {8, 16, 32}) err.push_back(max_abs(tff_diagonal(e, one, g, F, fn, 2 * fn + 8 * F) - ref));
  CAPTURE(err[0]);
  CAPTURE(err[1]);
  CAPTURE(err[2]);
  CHECK(err[1] < err[0]);
  if (err[2] > 1e-12) CHECK(err[2] / err[1] < err[1] / err[0]);
  CHECK(err[2] < 1e-9);
}
