#pragma once

#include <cstdint>
#include <vector>

#include "subres/common.hpp"
#include "subres/geometry.hpp"
#include "subres/solver.hpp"

namespace subres {

/// Trigonometric boundary density u_j(theta) = sum_n c_{j,n} e^{in theta} / sqrt|dD_j|.
class BoundaryMode {
 public:
  /// Rescales `coeffs` to unit L2(dD) norm. Throws InvalidArgument on a size mismatch.
  BoundaryMode(const ResonatorSystem& sys, const CVector& coeffs);

  cplx eval(int curve, double theta) const;
  const CVector& coeffs() const { return coeffs_; }
  /// L2(dD) norm of the unscaled input.
  double input_norm() const { return input_norm_; }
  double l2_norm() const;

 private:
  const ResonatorSystem* sys_;
  CVector coeffs_;
  double input_norm_ = 0.0;
};

BoundaryMode boundary_mode(const ResonanceBranch& branch, const ResonatorSystem& sys);

enum class CellKind : std::uint8_t { interior, exterior, near_boundary };

struct GridSpec {
  double x_min = -1.0, x_max = 1.0, y_min = -1.0, y_max = 1.0;
  int nx = 64, ny = 64;  // nodes include both ends of each interval
  double x(int i) const { return nx == 1 ? x_min : x_min + (x_max - x_min) * i / (nx - 1); }
  double y(int j) const { return ny == 1 ? y_min : y_min + (y_max - y_min) * j / (ny - 1); }
};

struct FieldGrid {
  GridSpec spec;
  cplx omega;
  int branch_id = 0;
  CMatrix values;                 // nx x ny
  std::vector<CellKind> mask;     // i * ny + j
  CellKind kind(int i, int j) const { return mask[static_cast<std::size_t>(i) * spec.ny + j]; }
};

struct NearFieldOptions {
  int points_per_curve = 1024;     // trapezoid nodes for the layer potential
  double near_fraction = 1e-3;     // near-boundary band, relative to the curve diameter
  Execution exec = Execution::serial;
};

/// Interior / exterior / near-boundary label of every grid node.
std::vector<CellKind> classify(const ResonatorSystem& sys, const GridSpec& grid, double near_fraction = 1e-3);

/// Single-layer potential sum_j S_j[phi_j] (inside) or S_j[psi_j] (outside)
/// of an arbitrary density vector [phi; psi] at point x.
cplx single_layer_field(const ResonatorSystem& sys, cplx omega, const CVector& density, const Vec2& x,
                        int points_per_curve = 1024);

/// Field of a refined branch, scaled to unit L2(dD) boundary norm. Near-boundary
/// nodes copy the nearest resolved node. Throws InvalidArgument without densities.
FieldGrid near_field(const ResonanceBranch& branch, const ResonatorSystem& sys, const GridSpec& grid,
                     const NearFieldOptions& opts = {});

}  // namespace subres
