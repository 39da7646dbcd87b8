#include "test_main.hpp"

#include <cmath>
#include <numbers>

#include "subres/assembly_effective.hpp"
#include "subres/errors.hpp"
#include "subres/kernels.hpp"
#include "subres/quadrature.hpp"

using namespace subres;

namespace {

constexpr double kPi = std::numbers::pi;

double rel_diff(const CMatrix& a, const CMatrix& b) { return (a - b).norm() / std::max(b.norm(), 1e-300); }

// Direct double trapezoid sum for one block, normalized basis.
CMatrix brute_block(const BoundaryCurve& ci, const BoundaryCurve& cj, const quad::Kernel& k, int F, int Q) {
  const auto si = quad::sample_curve(ci, Q), sj = quad::sample_curve(cj, Q);
  const double h = 2 * kPi / Q;
  CMatrix E = CMatrix::Zero(2 * F + 1, 2 * F + 1);
  for (int p = 0; p < Q; ++p)
    for (int q = 0; q < Q; ++q) {
      const cplx v = k(si[p], sj[q], -1.0) * si[p].speed * sj[q].speed * h * h;
      for (int m = -F; m <= F; ++m)
        for (int n = -F; n <= F; ++n) E(m + F, n + F) += v * std::polar(1.0, -m * p * h + n * q * h);
    }
  return E / std::sqrt(ci.perimeter() * cj.perimeter());
}

}  // namespace

TEST_CASE("unit circle diagonal symbols") {
  ResonatorSystem sys({BoundaryCurve::circle({0, 0}, 1.0)}, 1e-3, 4, 32);
  const auto eff = assemble_effective(sys);
  for (int m = -4; m <= 4; ++m) {
    const int am = std::abs(m);
    CHECK(std::abs(eff.C0(m + 4, m + 4) - (m == 0 ? 0.0 : -0.5)) < 1e-15);
    if (am >= 2) CHECK(std::abs(eff.K2(m + 4, m + 4) - 1.0 / (4.0 * am * (am * am - 1.0))) < 1e-15);
  }
  CHECK(std::abs(eff.K1(4, 4) - 0.5) < 1e-15);
  CHECK(std::abs(eff.K1(5, 5) + 0.25) < 1e-15);
  CHECK(eff.gram == CMatrix::Identity(9, 9));
}

TEST_CASE("circle symbols agree with generic quadrature") {
  ResonatorSystem sys({BoundaryCurve::circle({0, 0}, 1.0), BoundaryCurve::circle({2.9, 0.5}, 0.7),
                       BoundaryCurve::circle({-0.4, 2.6}, 1.2)},
                      1e-3, 5, 72);
  const auto c = assemble_effective(sys, Execution::serial, AssemblyPath::closed_form);
  const auto q = assemble_effective(sys, Execution::serial, AssemblyPath::quadrature);
  CHECK(rel_diff(q.C0, c.C0) < 1e-10);
  CHECK(rel_diff(q.K1, c.K1) < 1e-10);
  CHECK(rel_diff(q.K2, c.K2) < 1e-10);
  CHECK(rel_diff(q.gram, c.gram) < 1e-13);
}

TEST_CASE("well-separated circles match an oversampled direct sum") {
  ResonatorSystem sys({BoundaryCurve::circle({0, 0}, 1.0), BoundaryCurve::circle({4.0, 1.0}, 0.8)}, 1e-3, 3, 32);
  const auto eff = assemble_effective(sys);
  const int M = 7;
  const quad::Kernel g0 = [](const CurveSample& x, const CurveSample& y, double) -> cplx {
    return -kernels::dnu_g_k(0, x.point, y.point, x.normal);
  };
  const quad::Kernel g1 = [](const CurveSample& x, const CurveSample& y, double) -> cplx {
    return kernels::dnu_g_k(1, x.point, y.point, x.normal);
  };
  const quad::Kernel g2 = [](const CurveSample& x, const CurveSample& y, double) -> cplx {
    return kernels::dnu_g_k(2, x.point, y.point, x.normal);
  };
  for (int i = 0; i < 2; ++i) {
    const int j = 1 - i;
    const auto& ci = sys.curves[i];
    const auto& cj = sys.curves[j];
    CHECK((eff.C0.block(i * M, j * M, M, M) - brute_block(ci, cj, g0, 3, 320)).cwiseAbs().maxCoeff() < 1e-11);
    CHECK((eff.K1.block(i * M, j * M, M, M) - brute_block(ci, cj, g1, 3, 320)).cwiseAbs().maxCoeff() < 1e-11);
    CHECK((eff.K2.block(i * M, j * M, M, M) - brute_block(ci, cj, g2, 3, 320)).cwiseAbs().maxCoeff() < 1e-11);
  }
}

TEST_CASE("constant-mode rows of C0 vanish for every geometry") {
  ResonatorSystem sys({BoundaryCurve::ellipse({0, 0}, 1.4, 0.7, 0.3), BoundaryCurve::star({3.3, 0.2}, 1.0, 0.15, 5)},
                      1e-3, 3, 64);
  const auto eff = assemble_effective(sys);
  for (int i = 0; i < 2; ++i) CHECK(eff.C0.row(eff.row(i, 0)).norm() == 0.0);
  // Self-convergence of the remaining entries.
  const auto e1 = assemble_effective(ResonatorSystem(sys.curves, 1e-3, 3, 128));
  const auto e2 = assemble_effective(ResonatorSystem(sys.curves, 1e-3, 3, 192));
  CHECK(rel_diff(e1.C0, e2.C0) < 1e-11);
  CHECK(rel_diff(e1.K2, e2.K2) < 1e-11);
}

TEST_CASE("splitting and filtering give the same K2 on curved boundaries") {
  ResonatorSystem sys({BoundaryCurve::ellipse({0, 0}, 1.4, 0.7, 0.3), BoundaryCurve::star({3.3, 0.2}, 1.0, 0.15, 5)},
                      1e-3, 3, 256);
  const auto a = assemble_effective(sys, Execution::serial, AssemblyPath::automatic, DiagonalMethod::kussmaul_martensen);
  const auto b = assemble_effective(sys, Execution::serial, AssemblyPath::automatic, DiagonalMethod::fourier_filtering);
  CHECK((a.K2 - b.K2).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("compose_RF algebra") {
  ResonatorSystem sys({BoundaryCurve::circle({0, 0}, 1.0), BoundaryCurve::circle({3, 0.3}, 0.8)}, 1e-3, 2, 32);
  const auto eff = assemble_effective(sys);
  CHECK(rel_diff(compose_RF(eff, cplx(1e-150, 0.0), 0.0), eff.C0) < 1e-15);
  const cplx w(0.03, -0.001), v(0.02, 0.0);
  const double d = 1e-4;
  const CMatrix diff = compose_RF(eff, w, d) - compose_RF(eff, v, d);
  const CMatrix expect = -(w * w * std::log(w) - v * v * std::log(v)) * eff.K1 - (w * w - v * v) * eff.K2;
  CHECK((diff - expect).cwiseAbs().maxCoeff() < 1e-15);
  CHECK_THROWS_AS(compose_RF(eff, 0.0, d), DomainError);
}

TEST_CASE("capacitance data") {
  ResonatorSystem one({BoundaryCurve::circle({0, 0}, 1.0)}, 1e-3, 2, 32);
  const auto c1 = capacitance_F0(one);
  CHECK(std::abs(c1.K1_0(0, 0) - 0.5) < 1e-15);
  CHECK(std::abs(c1.mu1 - 0.5) < 1e-15);
  const auto eff1 = assemble_effective(one);
  CHECK(c1.K2_0(0, 0) == eff1.K2(eff1.row(0, 0), eff1.row(0, 0)));
  // K2_0 for a unit circle: (1/2)(log(1/2) + gamma - i pi/2)
  const cplx expect = 0.5 * cplx(std::log(0.5) + kernels::kGamma, -kPi / 2);
  CHECK(std::abs(c1.K2_0(0, 0) - expect) < 1e-15);

  ResonatorSystem sys({BoundaryCurve::circle({0, 0}, 1.0), BoundaryCurve::ellipse({3.1, 0.2}, 1.1, 0.6, 0.4),
                       BoundaryCurve::star({0.5, 3.0}, 0.9, 0.1, 4)},
                      1e-3, 3, 64);
  const auto eff = assemble_effective(sys);
  const auto c = capacitance_F0(sys, eff);
  CHECK((c.K1_0 - (c.v1 * c.w1.transpose() / (2 * kPi)).cast<cplx>()).norm() < 1e-12);
  Eigen::JacobiSVD<CMatrix> svd(c.K1_0);
  CHECK(svd.singularValues()(1) < 1e-12);
  Eigen::ComplexEigenSolver<CMatrix> es(c.K1_0);
  double top = 0.0;
  for (int k = 0; k < 3; ++k) top = std::max(top, std::abs(es.eigenvalues()(k)));
  CHECK(std::abs(top - c.mu1) < 1e-12);
  // ker K1_0 = {x : w1 . x = 0}
  Eigen::MatrixXd basis = Eigen::MatrixXd::Identity(3, 3) - c.w1 * c.w1.transpose() / c.w1.squaredNorm();
  CHECK((c.K1_0 * basis.cast<cplx>()).norm() < 1e-12);
  // Embedding: constant-mode entries of K1 reproduce the closed form.
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(std::abs(eff.K1(eff.row(i, 0), eff.row(j, 0)) - c.K1_0(i, j)) < 1e-12);
}

TEST_CASE("parallel effective assembly is bit-identical") {
  ResonatorSystem sys({BoundaryCurve::circle({0, 0}, 1.0), BoundaryCurve::ellipse({3.1, 0.2}, 1.1, 0.6, 0.4),
                       BoundaryCurve::star({0.5, 3.0}, 0.9, 0.1, 4)},
                      1e-3, 3, 48);
  const auto a = assemble_effective(sys, Execution::serial);
  const auto b = assemble_effective(sys, Execution::parallel);
  CHECK((a.K2 - b.K2).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a.C0 - b.C0).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a.K1 - b.K1).cwiseAbs().maxCoeff() == 0.0);
}
