#include "subres/fields.hpp"

#include <cmath>
#include <numbers>

#include "subres/assembly_full.hpp"
#include "subres/errors.hpp"
#include "subres/kernels.hpp"

namespace subres {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Trapezoid nodes of one curve with the interior and exterior densities.
struct CurveNodes {
  std::vector<Vec2> y;
  std::vector<double> w;  // speed * 2pi / M
  std::vector<cplx> phi, psi;
};

std::vector<CurveNodes> sample_densities(const ResonatorSystem& sys, const CVector& density, int M) {
  const FullIndex idx{sys.size(), sys.F};
  if (density.size() != idx.size())
    throw InvalidArgument("density has length " + std::to_string(density.size()) + ", expected " +
                          std::to_string(idx.size()));
  std::vector<CurveNodes> out(sys.size());
  for (int i = 0; i < sys.size(); ++i) {
    auto& c = out[i];
    for (int q = 0; q < M; ++q) {
      const double t = kTwoPi * q / M;
      const auto s = sys.curves[i].eval(t);
      cplx a = 0.0, b = 0.0;
      for (int n = -sys.F; n <= sys.F; ++n) {
        const cplx e = std::polar(1.0, n * t);
        a += density(idx(0, i, n)) * e;
        b += density(idx(1, i, n)) * e;
      }
      c.y.push_back(s.point);
      c.w.push_back(s.speed * kTwoPi / M);
      c.phi.push_back(a);
      c.psi.push_back(b);
    }
  }
  return out;
}

bool inside_any(const ResonatorSystem& sys, const Vec2& x) {
  for (const auto& c : sys.curves)
    if (c.contains(x)) return true;
  return false;
}

cplx evaluate(const std::vector<CurveNodes>& nodes, cplx omega, const Vec2& x, bool inside) {
  cplx u = 0.0;
  for (const auto& c : nodes) {
    const auto& dens = inside ? c.phi : c.psi;
    for (std::size_t q = 0; q < c.y.size(); ++q) u += kernels::phi_omega(omega, x, c.y[q]) * dens[q] * c.w[q];
  }
  return u;
}

}  // namespace

BoundaryMode::BoundaryMode(const ResonatorSystem& sys, const CVector& coeffs) : sys_(&sys), coeffs_(coeffs) {
  if (coeffs.size() != sys.size() * sys.modes())
    throw InvalidArgument("mode has " + std::to_string(coeffs.size()) + " coefficients, expected " +
                          std::to_string(sys.size() * sys.modes()));
  input_norm_ = l2_norm();
  if (input_norm_ > 0.0) coeffs_ /= input_norm_;
}

double BoundaryMode::l2_norm() const {
  const CMatrix G = gram_matrix(*sys_);
  const int M = sys_->modes();
  double sum = 0.0;
  for (int i = 0; i < sys_->size(); ++i) {
    const auto c = coeffs_.segment(i * M, M);
    sum += std::real(c.dot(G.block(i * M, i * M, M, M) * c)) / sys_->curves[i].perimeter();
  }
  return std::sqrt(std::max(sum, 0.0));
}

cplx BoundaryMode::eval(int curve, double theta) const {
  if (curve < 0 || curve >= sys_->size()) throw InvalidArgument("curve index out of range");
  const int M = sys_->modes(), F = sys_->F;
  cplx u = 0.0;
  for (int n = -F; n <= F; ++n) u += coeffs_(curve * M + n + F) * std::polar(1.0, n * theta);
  return u / std::sqrt(sys_->curves[curve].perimeter());
}

BoundaryMode boundary_mode(const ResonanceBranch& branch, const ResonatorSystem& sys) {
  return BoundaryMode(sys, branch.mode_coeffs);
}

std::vector<CellKind> classify(const ResonatorSystem& sys, const GridSpec& grid, double near_fraction) {
  struct Bounds {
    double rmin = 1e300, rmax = 0.0, tol = 0.0;
  };
  std::vector<Bounds> bounds(sys.size());
  for (int i = 0; i < sys.size(); ++i) {
    const auto& c = sys.curves[i];
    for (int q = 0; q < 512; ++q) {
      const double r = (c.point(kTwoPi * q / 512) - c.center()).norm();
      bounds[i].rmin = std::min(bounds[i].rmin, r);
      bounds[i].rmax = std::max(bounds[i].rmax, r);
    }
    bounds[i].tol = near_fraction * c.diameter();
  }
  std::vector<CellKind> mask(static_cast<std::size_t>(grid.nx) * grid.ny, CellKind::exterior);
  for (int i = 0; i < grid.nx; ++i) {
    for (int j = 0; j < grid.ny; ++j) {
      const Vec2 x(grid.x(i), grid.y(j));
      CellKind k = CellKind::exterior;
      for (int c = 0; c < sys.size() && k != CellKind::near_boundary; ++c) {
        const auto& b = bounds[c];
        const auto& curve = sys.curves[c];
        const double r = (x - curve.center()).norm();
        // Sampled radii bracket the curve up to the sampling error, hence the slack.
        const double slack = 0.02 * b.rmax + b.tol;
        if (r > b.rmax + slack) continue;
        if (r < b.rmin - slack) {
          k = CellKind::interior;
          continue;
        }
        if (curve.distance_to(x) < b.tol)
          k = CellKind::near_boundary;
        else if (curve.contains(x))
          k = CellKind::interior;
      }
      mask[static_cast<std::size_t>(i) * grid.ny + j] = k;
    }
  }
  return mask;
}

cplx single_layer_field(const ResonatorSystem& sys, cplx omega, const CVector& density, const Vec2& x,
                        int points_per_curve) {
  const auto nodes = sample_densities(sys, density, points_per_curve);
  return evaluate(nodes, omega, x, inside_any(sys, x));
}

FieldGrid near_field(const ResonanceBranch& branch, const ResonatorSystem& sys, const GridSpec& grid,
                     const NearFieldOptions& opts) {
  if (branch.density.size() == 0) throw InvalidArgument("near_field needs a refined branch with densities");
  if (grid.nx < 1 || grid.ny < 1) throw InvalidArgument("grid resolution must be positive");
  FieldGrid out;
  out.spec = grid;
  out.omega = branch.omega;
  out.branch_id = branch.seed_index;
  out.mask = classify(sys, grid, opts.near_fraction);
  out.values = CMatrix::Zero(grid.nx, grid.ny);

  const double scale = branch.mode_coeffs.size() ? boundary_mode(branch, sys).input_norm() : 1.0;
  const CVector density = scale > 0.0 ? CVector(branch.density / scale) : branch.density;
  const auto nodes = sample_densities(sys, density, opts.points_per_curve);

#pragma omp parallel for schedule(dynamic) if (opts.exec == Execution::parallel)
  for (int i = 0; i < grid.nx; ++i) {
    for (int j = 0; j < grid.ny; ++j) {
      const auto k = out.kind(i, j);
      if (k == CellKind::near_boundary) continue;
      out.values(i, j) = evaluate(nodes, branch.omega, Vec2(grid.x(i), grid.y(j)), k == CellKind::interior);
    }
  }

  // Nearest resolved node, ties to the lowest linear index.
  std::vector<std::pair<int, int>> resolved;
  for (int i = 0; i < grid.nx; ++i)
    for (int j = 0; j < grid.ny; ++j)
      if (out.kind(i, j) != CellKind::near_boundary) resolved.emplace_back(i, j);
  if (resolved.empty()) return out;
  for (int i = 0; i < grid.nx; ++i) {
    for (int j = 0; j < grid.ny; ++j) {
      if (out.kind(i, j) != CellKind::near_boundary) continue;
      long best = -1;
      std::pair<int, int> arg{0, 0};
      for (const auto& [a, b] : resolved) {
        const long d = static_cast<long>(a - i) * (a - i) + static_cast<long>(b - j) * (b - j);
        if (best < 0 || d < best) {
          best = d;
          arg = {a, b};
        }
      }
      out.values(i, j) = out.values(arg.first, arg.second);
    }
  }
  return out;
}

}  // namespace subres
