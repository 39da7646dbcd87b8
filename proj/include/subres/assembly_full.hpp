#pragma once

#include "subres/common.hpp"
#include "subres/geometry.hpp"

namespace subres {

/// Row/column layout of the full system: (block, resonator, mode) with the
/// interior density in block 0 and the exterior density in block 1.
struct FullIndex {
  int N = 0;
  int F = 0;
  int modes() const { return 2 * F + 1; }
  int half() const { return N * modes(); }
  int size() const { return 2 * half(); }
  int operator()(int block, int i, int m) const { return block * half() + i * modes() + (m + F); }
};

enum class AssemblyPath {
  automatic,    // closed form when every resonator is a circle, quadrature otherwise
  closed_form,  // circles only
  quadrature,   // treat every curve as generic
};

/// Galerkin blocks of the layer operators in the unnormalized e^{im theta}
/// basis, each N(2F+1) square. `Kp` is the principal-value operator without
/// the jump; `gram` is the arclength mass matrix.
struct LayerBlocks {
  CMatrix S;
  CMatrix Kp;
  CMatrix gram;
};

/// A(omega) = [[S, -S], [-(1/2 I + K'), delta (-1/2 I + K')]].
struct FullSystemMatrix {
  cplx omega;
  double delta = 0.0;
  FullIndex index;
  CMatrix A;
};

struct SingularTriplet {
  double sigma = 0.0;
  CVector u;  // left
  CVector v;  // right
};

LayerBlocks assemble_layers(const ResonatorSystem& sys, cplx omega, Execution exec = Execution::serial,
                            AssemblyPath path = AssemblyPath::automatic);

FullSystemMatrix assemble_A(const ResonatorSystem& sys, cplx omega, Execution exec = Execution::serial,
                            AssemblyPath path = AssemblyPath::automatic);

/// Block-diagonal arclength mass matrix, unnormalized basis.
CMatrix gram_matrix(const ResonatorSystem& sys);

/// Matrix-free A(omega) x for circles: diagonal symbols plus FFT Toeplitz
/// correlations for the coupling blocks. Throws UnsupportedError otherwise.
CVector apply_A_fast(const ResonatorSystem& sys, cplx omega, const CVector& x);

/// Smallest singular value with its left and right singular vectors.
SingularTriplet smallest_singular(const CMatrix& A);

}  // namespace subres
