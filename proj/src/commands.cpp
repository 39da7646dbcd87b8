#include "subres/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <array>
#include <limits>
#include <numbers>
#include <sstream>

#include "subres/errors.hpp"

namespace subres::cmd {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

const ResonanceBranch* by_seed(const std::vector<ResonanceBranch>& list, int seed_index) {
  for (const auto& b : list)
    if (b.seed_index == seed_index) return &b;
  return nullptr;
}

std::string number(double v) {
  if (std::isnan(v)) return "nan";
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

int exit_code(const SolverReport& rep) {
  const int n = rep.seeds.count();
  if (rep.final_stage == Stage::refined) {
    const int ok = static_cast<int>(rep.accepted.size());
    if (ok == 0) return kTotalFailure;
    return ok < n ? kPartialFailure : kSuccess;
  }
  if (rep.final_stage == Stage::effective && !rep.effective_converged) return kPartialFailure;
  return kSuccess;
}

std::string ConvergenceTable::csv() const {
  std::ostringstream os;
  os << parameter;
  for (const auto& c : columns) os << ',' << c;
  os << '\n';
  for (std::size_t r = 0; r < params.size(); ++r) {
    os << number(params[r]);
    for (double e : errors[r]) os << ',' << number(e);
    os << '\n';
  }
  os << "slope";
  for (double s : slopes) os << ',' << number(s);
  os << '\n';
  return os.str();
}

double fitted_slope(const std::vector<double>& x, const std::vector<double>& y, bool semilog) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (!(std::isfinite(y[k]) && y[k] > 0.0)) continue;
    const double a = semilog ? x[k] : std::log(x[k]);
    const double b = semilog ? std::log10(y[k]) : std::log(y[k]);
    sx += a;
    sy += b;
    sxx += a * a;
    sxy += a * b;
    ++n;
  }
  const double den = n * sxx - sx * sx;
  if (n < 2 || den == 0.0) return kNaN;
  return (n * sxy - sx * sy) / den;
}

ConvergenceTable converge_in_f(const io::RunConfig& cfg, Execution exec) {
  SolverSettings st = cfg.solver;
  st.exec = exec;
  const auto ref_sys = cfg.system(cfg.primary_delta(), cfg.convergence.F_ref);
  const auto ref = solve(ref_sys, st);
  const int n = ref.seeds.count();
  ConvergenceTable t;
  t.parameter = "F";
  for (int k = 0; k < n; ++k)
    t.columns.push_back((k == 0 ? std::string("log") : "regular_" + std::to_string(k)) + "_error");
  for (int F : cfg.convergence.F_values) {
    const auto rep = solve(cfg.system(cfg.primary_delta(), F), st);
    std::vector<double> row;
    for (int k = 0; k < n; ++k) {
      const auto* a = by_seed(rep.accepted, k);
      const auto* b = by_seed(ref.accepted, k);
      row.push_back(a && b ? std::abs(a->omega - b->omega) : kNaN);
    }
    t.params.push_back(F);
    t.errors.push_back(row);
  }
  for (int k = 0; k < n; ++k) {
    std::vector<double> col;
    for (const auto& r : t.errors) col.push_back(r[k]);
    t.slopes.push_back(fitted_slope(t.params, col, true));
  }
  return t;
}

ConvergenceTable converge_in_delta(const io::RunConfig& cfg, Execution exec) {
  SolverSettings st = cfg.solver;
  st.exec = exec;
  ConvergenceTable t;
  t.parameter = "delta";
  t.columns = {"log_seed", "regular_seed_mean", "log_effective", "regular_effective_mean"};
  const std::vector<double> deltas = cfg.sweep ? cfg.sweep->values() : std::vector<double>{cfg.delta};
  std::array<std::vector<double>, 4> scaled;
  for (double d : deltas) {
    const auto rep = solve(cfg.system(d, cfg.F), st);
    std::array<double, 4> e{kNaN, 0.0, kNaN, 0.0};
    int nreg = 0;
    bool complete = true;
    for (int k = 0; k < rep.seeds.count(); ++k) {
      const auto* r = by_seed(rep.accepted, k);
      if (!r) {
        complete = false;
        continue;
      }
      const double es = std::abs(rep.seed_branches[k].omega - r->omega);
      const double ee = std::abs(rep.effective_branches[k].omega - r->omega);
      if (k == 0) {
        e[0] = es;
        e[2] = ee;
      } else {
        e[1] += es;
        e[3] += ee;
        ++nreg;
      }
    }
    if (nreg == 0 || !complete) e[1] = e[3] = kNaN;
    if (nreg > 0 && complete) {
      e[1] /= nreg;
      e[3] /= nreg;
    }
    const double L = std::abs(std::log(d));
    // Remove the log factors of the predicted orders before fitting.
    scaled[0].push_back(e[0] * L);
    scaled[1].push_back(e[1] * std::sqrt(L));
    scaled[2].push_back(e[2] * std::pow(L, 1.5));
    scaled[3].push_back(e[3] / (L * L));
    t.params.push_back(d);
    t.errors.push_back({e[0], e[1], e[2], e[3]});
  }
  for (const auto& s : scaled) t.slopes.push_back(fitted_slope(deltas, s));
  return t;
}

GridSpec default_grid(const ResonatorSystem& sys, int nx, int ny) {
  double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300, dmax = 0.0;
  for (const auto& c : sys.curves) {
    for (int q = 0; q < 256; ++q) {
      const Vec2 p = c.point(2.0 * std::numbers::pi * q / 256);
      x0 = std::min(x0, p.x());
      x1 = std::max(x1, p.x());
      y0 = std::min(y0, p.y());
      y1 = std::max(y1, p.y());
    }
    dmax = std::max(dmax, c.diameter());
  }
  return GridSpec{x0 - dmax, x1 + dmax, y0 - dmax, y1 + dmax, nx, ny};
}

ModeFiles write_modes(const io::RunConfig& cfg, const SolverReport& rep, const ResonatorSystem& sys,
                      const std::string& out_dir, Execution exec) {
  const auto numbered = io::numbered_branches(rep);
  std::vector<int> ids = cfg.fields.branches;
  if (ids.empty())
    for (std::size_t k = 0; k < numbered.size(); ++k) ids.push_back(static_cast<int>(k) + 1);
  for (int id : ids) {
    if (id < 1 || id > static_cast<int>(numbered.size())) {
      std::string avail = numbered.empty() ? "none" : "1.." + std::to_string(numbered.size());
      throw InvalidArgument("unknown branch " + std::to_string(id) + " (available: " + avail + ")");
    }
    if (numbered[id - 1]->density.size() == 0)
      throw InvalidArgument("branch " + std::to_string(id) + " has no refined densities; run the refined stage");
  }
  std::filesystem::create_directories(out_dir);
  const GridSpec grid = cfg.fields.grid ? *cfg.fields.grid : default_grid(sys, cfg.fields.nx, cfg.fields.ny);
  NearFieldOptions opt;
  opt.points_per_curve = cfg.fields.points_per_curve;
  opt.exec = exec;
  ModeFiles out;
  io::json manifest{{"schema", "subres-modes/1"}, {"N", sys.size()}, {"F", sys.F}, {"delta", sys.delta}};
  manifest["branches"] = io::json::array();
  for (int id : ids) {
    const auto& b = *numbered[id - 1];
    auto f = near_field(b, sys, grid, opt);
    f.branch_id = id;
    const std::string name = "mode_branch_" + std::to_string(id) + ".csv";
    io::write_text((std::filesystem::path(out_dir) / name).string(), io::field_csv(f));
    out.files.push_back(name);
    io::json coeffs = io::json::array();
    for (Eigen::Index k = 0; k < b.mode_coeffs.size(); ++k) coeffs.push_back(io::complex_json(b.mode_coeffs(k)));
    manifest["branches"].push_back({{"id", id},
                                    {"file", name},
                                    {"class", to_string(b.branch_class)},
                                    {"omega", io::complex_json(b.omega)},
                                    {"mode_coeffs", coeffs}});
  }
  out.manifest = "manifest.json";
  io::write_text((std::filesystem::path(out_dir) / out.manifest).string(), manifest.dump(2) + "\n");
  return out;
}

std::vector<BoundaryCurve> lattice_circles(int N) {
  const int cols = std::max(4, static_cast<int>(std::ceil(std::sqrt(static_cast<double>(N)))));
  std::vector<BoundaryCurve> c;
  for (int i = 0; i < N; ++i) {
    const double x = 3.1 * (i % cols) + 0.2 * std::sin(1.3 * i);
    const double y = 3.3 * (i / cols) + 0.15 * std::cos(2.1 * i);
    c.push_back(BoundaryCurve::circle({x, y}, 0.8 + 0.1 * ((i * 7) % 5) / 4.0));
  }
  return c;
}

std::vector<ScalingRow> scaling_table(const std::vector<int>& Ns, int F, double delta, Execution exec, int repeats) {
  using Clock = std::chrono::steady_clock;
  std::vector<ScalingRow> rows;
  SolverSettings st;
  st.exec = exec;
  SolverSettings plain = st;
  plain.branch_polish = false;
  for (int N : Ns) {
    ResonatorSystem sys(lattice_circles(N), delta, F, ResonatorSystem::auto_q(F));
    ResonatorSystem reduced(lattice_circles(N), delta, 0, ResonatorSystem::auto_q(0));
    ScalingRow row;
    row.N = N;
    row.effective_seconds = row.full_seconds = 1e300;
    for (int r = 0; r < std::max(1, repeats); ++r) {
      auto t0 = Clock::now();
      const auto eff = assemble_effective(reduced, exec);
      const auto seeds = compute_seeds(capacitance_F0(reduced, eff), delta);
      const auto branches = effective_stage(eff, seeds, delta, plain);
      row.effective_seconds =
          std::min(row.effective_seconds, std::chrono::duration<double>(Clock::now() - t0).count());

      t0 = Clock::now();
      const auto s2 = compute_seeds(capacitance_F0(sys), delta);
      std::vector<ResonanceBranch> refined(s2.count());
#pragma omp parallel for schedule(dynamic) if (exec == Execution::parallel)
      for (int k = 0; k < s2.count(); ++k) {
        try {
          refined[k] = newton_refine(sys, s2.omega(k), st);
        } catch (const Error&) {
        }
      }
      row.full_seconds = std::min(row.full_seconds, std::chrono::duration<double>(Clock::now() - t0).count());
      (void)branches;
    }
    rows.push_back(row);
  }
  return rows;
}

std::string scaling_csv(const std::vector<ScalingRow>& rows) {
  std::ostringstream os;
  os.precision(6);
  os << "N,effective_seconds,full_seconds,ratio\n";
  for (const auto& r : rows)
    os << r.N << ',' << r.effective_seconds << ',' << r.full_seconds << ',' << r.full_seconds / r.effective_seconds
       << '\n';
  std::vector<double> n, e, f;
  for (const auto& r : rows) {
    n.push_back(r.N);
    e.push_back(r.effective_seconds);
    f.push_back(r.full_seconds);
  }
  os << "exponent," << fitted_slope(n, e) << ',' << fitted_slope(n, f) << ",\n";
  return os.str();
}

}  // namespace subres::cmd
