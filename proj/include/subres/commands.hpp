#pragma once

#include <string>
#include <vector>

#include "subres/io.hpp"

namespace subres::cmd {

enum ExitCode { kSuccess = 0, kConfigError = 2, kPartialFailure = 3, kTotalFailure = 4 };

/// 0 when every branch was produced, 3 when some failed, 4 when none survived.
int exit_code(const SolverReport& rep);

struct ConvergenceTable {
  std::string parameter;          // "F" or "delta"
  std::vector<std::string> columns;
  std::vector<double> params;
  std::vector<std::vector<double>> errors;  // rows x columns, NaN when a branch is missing
  std::vector<double> slopes;                // one per column
  std::string csv() const;
};

/// |omega_F - omega_{F_ref}| per seed branch for each F in the config.
ConvergenceTable converge_in_f(const io::RunConfig& cfg, Execution exec = Execution::serial);

/// Seed and effective errors against refined resonances over a delta sweep.
/// Columns: log_seed, regular_seed_mean, log_effective, regular_effective_mean.
/// Slopes are log-log fits after removing the theoretical log factors.
ConvergenceTable converge_in_delta(const io::RunConfig& cfg, Execution exec = Execution::serial);

/// Least-squares slope of log|y| against log x (or against x when `semilog`).
double fitted_slope(const std::vector<double>& x, const std::vector<double>& y, bool semilog = false);

struct ModeFiles {
  std::vector<std::string> files;
  std::string manifest;
};

/// Field grid files for the selected 1-based branch ids plus a manifest.
/// Throws InvalidArgument listing the available ids on a bad selection.
ModeFiles write_modes(const io::RunConfig& cfg, const SolverReport& rep, const ResonatorSystem& sys,
                      const std::string& out_dir, Execution exec = Execution::serial);

/// Default plotting box: bounding box of all curves padded by the largest diameter.
GridSpec default_grid(const ResonatorSystem& sys, int nx, int ny);

struct ScalingRow {
  int N = 0;
  double effective_seconds = 0.0;  // N x N effective matrices (F = 0), seeds and shared-mean fixed point
  double full_seconds = 0.0;       // seeds plus Newton refinement on the full matrix at order F
};

/// Irregular lattice of N circles used by the scaling table.
std::vector<BoundaryCurve> lattice_circles(int N);

std::vector<ScalingRow> scaling_table(const std::vector<int>& Ns, int F, double delta, Execution exec,
                                      int repeats = 1);
std::string scaling_csv(const std::vector<ScalingRow>& rows);

}  // namespace subres::cmd
