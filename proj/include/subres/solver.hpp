#pragma once

#include <string>
#include <vector>

#include "subres/assembly_effective.hpp"
#include "subres/assembly_full.hpp"
#include "subres/asymptotics.hpp"
#include "subres/common.hpp"

namespace subres {

struct SolverSettings {
  double eps_rel = 1e-10;       // fixed-point and Newton stopping tolerance
  double eps_sigma = 1e-8;      // acceptance threshold on sigma_min of the row-equilibrated matrix
  double eps_dist_rel = 1e-6;   // duplicate distance, relative to the mean seed modulus
  int max_newton = 40;
  int max_fixed_point = 60;
  double fd_step = 1e-6;        // relative step of the centred difference for A'(omega)
  bool branch_polish = true;    // per-branch fixed point after the shared-mean loop
  Execution exec = Execution::serial;
};

enum class Stage { seed, effective, refined };
std::string to_string(Stage s);
Stage stage_from_string(const std::string& s);

struct ResonanceBranch {
  cplx omega;
  BranchClass branch_class = BranchClass::regular;
  Stage stage = Stage::seed;
  int seed_index = 0;
  /// Boundary-trace coefficients in the normalized basis, unit norm, phase
  /// fixed so the largest coefficient is real and positive.
  CVector mode_coeffs;
  /// Interior and exterior densities [phi; psi] in the unnormalized Fourier
  /// basis, scaled so the single-layer trace equals the mode expansion
  /// (refined stage only).
  CVector density;
  double sigma_min = 0.0;
  int iterations = 0;
  bool converged = true;
  std::string note;
};

struct Timings {
  double seed = 0.0, effective = 0.0, refined = 0.0;
};

struct SolverReport {
  double delta = 0.0;
  int N = 0;
  int F = 0;
  BranchSeeds seeds;
  std::vector<ResonanceBranch> seed_branches;
  std::vector<ResonanceBranch> effective_branches;
  bool effective_converged = true;
  int fixed_point_iterations = 0;
  std::vector<ResonanceBranch> accepted;
  std::vector<ResonanceBranch> spurious;
  std::vector<ResonanceBranch> duplicate;
  Stage final_stage = Stage::refined;
  Timings timings;

  /// Branches of the final stage (accepted ones after refinement).
  const std::vector<ResonanceBranch>& result() const;
};

/// Rescale to unit norm with the largest entry real positive.
void normalize_phase(CVector& v);

/// Newton step limited to |step| <= |omega| / 2.
cplx cap_step(cplx step, cplx omega);

/// Seed-stage branches with constant-mode coefficient vectors.
std::vector<ResonanceBranch> seed_branches(const BranchSeeds& seeds, int F);

/// Fixed-point iteration on R_F with log(omega) frozen at omega_0.
std::vector<ResonanceBranch> effective_stage(const EffectiveMatrices& eff, const BranchSeeds& seeds, double delta,
                                             const SolverSettings& settings, bool* converged = nullptr,
                                             int* iterations = nullptr);

/// Row-equilibrated A(omega): rows scaled to unit max-norm.
CMatrix equilibrated_A(const ResonatorSystem& sys, cplx omega, Execution exec = Execution::serial);

/// Newton iteration on u* A(omega) v with (u, v) refreshed by SVD each step.
ResonanceBranch newton_refine(const ResonatorSystem& sys, cplx omega_start, const SolverSettings& settings);

/// Residual and distance filtering, deterministic order by |omega|.
void accept_filter(std::vector<ResonanceBranch> candidates, double omega_scale, const SolverSettings& settings,
                   SolverReport& report);

/// Full pipeline up to `final_stage`.
SolverReport solve(const ResonatorSystem& sys, const SolverSettings& settings, Stage final_stage = Stage::refined);

}  // namespace subres
