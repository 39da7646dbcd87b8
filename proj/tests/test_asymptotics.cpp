#include "test_main.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "subres/asymptotics.hpp"
#include "subres/errors.hpp"

using namespace subres;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<BoundaryCurve> irregular(int N) {
  std::vector<BoundaryCurve> c;
  for (int i = 0; i < N; ++i) {
    const double x = 3.1 * (i % 4) + 0.2 * std::sin(1.3 * i);
    const double y = 3.3 * (i / 4) + 0.15 * std::cos(2.1 * i);
    c.push_back(BoundaryCurve::circle({x, y}, 0.8 + 0.1 * ((i * 7) % 5) / 4.0));
  }
  return c;
}

Capacitance capacitance_for(int N) { return capacitance_F0(ResonatorSystem(irregular(N), 1e-6, 0, 16)); }

}  // namespace

TEST_CASE("single unit circle has only the logarithmic branch") {
  const auto cap = capacitance_F0(ResonatorSystem({BoundaryCurve::circle({0, 0}, 1.0)}, 1e-6, 0, 16));
  const double delta = 1e-6;
  const auto s = compute_seeds(cap, delta);
  CHECK(s.count() == 1);
  CHECK(s.omega_reg.empty());
  CHECK(std::abs(s.mu1 - 0.5) < 1e-15);
  CHECK(std::abs(s.alpha - cap.K2_0(0, 0)) < 1e-15);
  const double ld = std::log(delta);
  const cplx w2 = -2.0 * delta / (0.5 * ld - 0.5 * std::log(cplx(-0.25 * ld)) + 2.0 * cap.K2_0(0, 0));
  CHECK(std::abs(s.omega_log * s.omega_log - w2) < 1e-14 * std::abs(w2));
  CHECK(s.omega_log.real() > 0.0);
  CHECK(s.branch_class(0) == BranchClass::logarithmic);
}

TEST_CASE("alpha and B agree with the oblique projector") {
  for (int N : {2, 3, 5}) {
    const auto cap = capacitance_for(N);
    const auto split = split_capacitance(cap);
    const CVector v = cap.v1.cast<cplx>(), w = cap.w1.cast<cplx>();
    const cplx wv = w.transpose() * v;
    const cplx alpha = (w.transpose() * cap.K2_0 * v)(0) / wv;
    CHECK(std::abs(split.alpha - alpha) < 1e-13 * std::abs(alpha));

    const CMatrix P = v * w.transpose() / wv;
    const CMatrix I = CMatrix::Identity(N, N);
    const CMatrix R = (I - P) * cap.K2_0 * (I - P);
    Eigen::ComplexEigenSolver<CMatrix> es(R);
    std::vector<cplx> ref(es.eigenvalues().begin(), es.eigenvalues().end());
    std::sort(ref.begin(), ref.end(), [](cplx a, cplx b) { return std::abs(a) < std::abs(b); });
    CHECK(std::abs(ref[0]) < 1e-12);
    ref.erase(ref.begin());
    const auto s = compute_seeds(cap, 1e-6);
    REQUIRE(static_cast<int>(s.B_eigs.size()) == N - 1);
    for (cplx nu : s.B_eigs) {
      double best = 1e300;
      for (cplx r : ref) best = std::min(best, std::abs(r - nu));
      CHECK(best < 1e-12 * std::abs(nu));
    }
  }
}

TEST_CASE("two circles give one logarithmic and one regular branch") {
  const auto cap = capacitance_for(2);
  const auto s = compute_seeds(cap, 1e-5);
  REQUIRE(s.count() == 2);
  const auto split = split_capacitance(cap);
  CHECK(std::abs(s.B_eigs[0] - split.B(0, 0)) < 1e-14 * std::abs(split.B(0, 0)));
  CHECK(std::abs(s.omega_reg[0] * s.omega_reg[0] + 1e-5 / s.B_eigs[0]) < 1e-14 * std::abs(s.omega_reg[0] * s.omega_reg[0]));
  CHECK(s.branch_class(1) == BranchClass::regular);
}

TEST_CASE("seed invariants") {
  const auto cap = capacitance_for(8);
  const double delta = 1e-6;
  const auto s = compute_seeds(cap, delta);
  CHECK(s.count() == 8);
  CHECK(std::abs(s.mu1 - cap.mu1) == 0.0);
  double area = 0.0;
  for (const auto& c : irregular(8)) area += c.area();
  CHECK(std::abs(s.mu1 - area / (2 * kPi)) < 1e-12);
  for (int k = 0; k < s.count(); ++k) {
    CHECK(s.omega(k).real() > 0.0);
    CHECK(std::abs(s.omega(k)) < 0.1);
  }
  for (std::size_t k = 1; k < s.B_eigs.size(); ++k)
    CHECK(std::abs(delta / s.B_eigs[k - 1]) <= std::abs(delta / s.B_eigs[k]));
  for (const auto& v : s.null_vectors) CHECK(std::abs(v.norm() - 1.0) < 1e-14);
  // regular null vectors lie in ker K1_0
  for (std::size_t k = 1; k < s.null_vectors.size(); ++k)
    CHECK(std::abs(cap.w1.cast<cplx>().dot(s.null_vectors[k])) < 1e-13);
  const auto g = s.galerkin_vectors(3);
  REQUIRE(g.size() == 8);
  for (int i = 0; i < 8; ++i) {
    CHECK(g[0].size() == 8 * 7);
    CHECK(g[2](i * 7 + 3) == s.null_vectors[2](i));
    CHECK(g[2](i * 7) == cplx(0.0));
  }
}

TEST_CASE("logarithmic scaling law") {
  const auto cap = capacitance_for(3);
  double prev = 1e300;
  for (int e = 4; e <= 10; ++e) {
    const double delta = std::pow(10.0, -e);
    const auto s = compute_seeds(cap, delta);
    const double ratio = std::norm(s.omega_log) * std::abs(std::log(delta)) / delta;
    const double dev = std::abs(ratio * s.mu1 / 2.0 - 1.0);
    CHECK(dev < prev);
    prev = dev;
  }
  CHECK(prev < 0.2);
}

TEST_CASE("branches are asymptotically disjoint") {
  const auto cap = capacitance_for(4);
  double prev = 1e300;
  for (int e = 2; e <= 12; e += 2) {
    const auto s = compute_seeds(cap, std::pow(10.0, -e));
    double mreg = 1e300;
    for (cplx w : s.omega_reg) mreg = std::min(mreg, std::abs(w));
    const double r = std::abs(s.omega_log) / mreg;
    CHECK(r < prev);
    prev = r;
    for (std::size_t k = 0; k < s.B_eigs.size(); ++k)
      CHECK(std::abs(std::norm(s.omega_reg[k]) / std::pow(10.0, -e) - 1.0 / std::abs(s.B_eigs[k])) <
            1e-12 / std::abs(s.B_eigs[k]));
  }
  CHECK(prev < 0.5);
}

TEST_CASE("regime flag and errors") {
  const auto cap = capacitance_for(2);
  CHECK(compute_seeds(cap, 1e-3).asymptotic_regime);
  const auto loose = compute_seeds(cap, 0.05);
  CHECK_FALSE(loose.asymptotic_regime);
  CHECK(loose.count() == 2);
  CHECK_THROWS_AS(compute_seeds(cap, 0.0), InvalidArgument);

  Capacitance degenerate = cap;
  degenerate.K2_0.setZero();
  CHECK_THROWS_AS(compute_seeds(degenerate, 1e-6), NumericalError);
}
