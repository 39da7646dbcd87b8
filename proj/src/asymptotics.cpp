#include "subres/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "subres/errors.hpp"

namespace subres {

std::string to_string(BranchClass c) { return c == BranchClass::logarithmic ? "logarithmic" : "regular"; }

std::vector<CVector> BranchSeeds::galerkin_vectors(int F) const {
  const int N = static_cast<int>(null_vectors.front().size());
  const int M = 2 * F + 1;
  std::vector<CVector> out;
  for (const auto& v : null_vectors) {
    CVector g = CVector::Zero(N * M);
    for (int i = 0; i < N; ++i) g(i * M + F) = v(i);
    out.push_back(g);
  }
  return out;
}

SpectralSplit split_capacitance(const Capacitance& cap) {
  const int N = static_cast<int>(cap.v1.size());
  SpectralSplit s;
  s.T.resize(N, N);
  s.T.col(0) = cap.v1 / cap.v1.norm();
  if (N > 1) {
    Eigen::HouseholderQR<RMatrix> qr(cap.w1);
    const RMatrix Qfull = qr.householderQ() * RMatrix::Identity(N, N);
    s.T.rightCols(N - 1) = Qfull.rightCols(N - 1);
  }
  const CMatrix Tc = s.T.cast<cplx>();
  const CMatrix Mx = Tc.partialPivLu().solve(cap.K2_0 * Tc);
  s.alpha = Mx(0, 0);
  s.B = Mx.bottomRightCorner(N - 1, N - 1);
  return s;
}

BranchSeeds compute_seeds(const Capacitance& cap, double delta) {
  if (!(delta > 0.0)) throw InvalidArgument("compute_seeds: delta must be positive");
  const int N = static_cast<int>(cap.v1.size());
  const auto split = split_capacitance(cap);
  BranchSeeds s;
  s.delta = delta;
  s.mu1 = cap.mu1;
  s.alpha = split.alpha;
  s.asymptotic_regime = delta <= 1e-2;

  const double ld = std::log(delta);
  const cplx denom = s.mu1 * ld - s.mu1 * std::log(cplx(-0.5 * s.mu1 * ld)) + 2.0 * s.alpha;
  s.omega_log = std::sqrt(-2.0 * delta / denom);
  s.null_vectors.push_back(split.T.col(0).cast<cplx>());

  if (N > 1) {
    Eigen::JacobiSVD<CMatrix> svd(split.B);
    const auto& sv = svd.singularValues();
    if (!(sv(sv.size() - 1) > 1e-12 * sv(0))) {
      throw NumericalError("compute_seeds: the V-perp block of K2_0 is singular (degenerate regular branches)");
    }
    Eigen::ComplexEigenSolver<CMatrix> es(split.B);
    if (es.info() != Eigen::Success) throw NumericalError("compute_seeds: eigen-decomposition of B failed");
    std::vector<int> order(N - 1);
    std::iota(order.begin(), order.end(), 0);
    const auto& ev = es.eigenvalues();
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      const double ka = std::abs(delta / ev(a)), kb = std::abs(delta / ev(b));
      if (ka != kb) return ka < kb;
      return std::arg(ev(a)) < std::arg(ev(b));
    });
    const CMatrix lift = split.T.rightCols(N - 1).cast<cplx>();
    for (int k : order) {
      s.B_eigs.push_back(ev(k));
      s.omega_reg.push_back(std::sqrt(-delta / ev(k)));
      CVector v = lift * es.eigenvectors().col(k);
      s.null_vectors.push_back(v / v.norm());
    }
  }
  return s;
}

}  // namespace subres
