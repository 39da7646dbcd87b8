#pragma once

#include <string>
#include <vector>

#include "subres/assembly_effective.hpp"
#include "subres/common.hpp"

namespace subres {

enum class BranchClass { logarithmic, regular };
std::string to_string(BranchClass c);

/// Leading-order resonance seeds: one logarithmic branch and N-1 regular ones.
struct BranchSeeds {
  double delta = 0.0;
  double mu1 = 0.0;
  cplx alpha;                   // constant-mode block of K2_0 along v1
  std::vector<cplx> B_eigs;     // nu_2..nu_N, sorted by |delta/nu| ascending
  cplx omega_log;
  std::vector<cplx> omega_reg;  // same order as B_eigs
  /// Unit vectors in C^N: v1 direction first, then the lifted eigenvectors of B.
  std::vector<CVector> null_vectors;
  /// Outside the asymptotic regime (delta > 1e-2) the seeds are still produced.
  bool asymptotic_regime = true;

  int count() const { return 1 + static_cast<int>(omega_reg.size()); }
  cplx omega(int k) const { return k == 0 ? omega_log : omega_reg[k - 1]; }
  BranchClass branch_class(int k) const { return k == 0 ? BranchClass::logarithmic : BranchClass::regular; }
  /// Null vectors embedded in the constant-mode subspace of the N(2F+1) basis.
  std::vector<CVector> galerkin_vectors(int F) const;
};

/// Oblique splitting of C^N along v1 and ker K1_0 = w1^perp.
struct SpectralSplit {
  RMatrix T;  // [v1/|v1|, orthonormal basis of w1^perp]
  cplx alpha;
  CMatrix B;  // (N-1) x (N-1)
};
SpectralSplit split_capacitance(const Capacitance& cap);

/// Throws NumericalError when B is singular (branch degeneracy).
BranchSeeds compute_seeds(const Capacitance& cap, double delta);

}  // namespace subres
