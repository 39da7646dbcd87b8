#include <omp.h>

#include <cstdio>
#include <filesystem>
#include <iostream>

#include "CLI11.hpp"
#include "subres/commands.hpp"
#include "subres/errors.hpp"

using namespace subres;

namespace {

struct Options {
  std::string config;
  std::string out = "out";
  int F = -1;
  double delta = -1.0;
  std::string stage = "refined";
  int threads = 1;
  bool timings = false;
  std::vector<int> branches;
  std::vector<int> sizes{1, 2, 4, 8, 16, 32};
  int repeats = 1;
};

io::RunConfig load(const Options& o) {
  auto cfg = io::load_config(o.config);
  if (o.F >= 0) {
    cfg.F = o.F;
    if (cfg.Q && *cfg.Q < ResonatorSystem::auto_q(o.F)) cfg.Q.reset();
  }
  if (o.delta > 0.0) {
    if (!(o.delta < 1.0)) throw ConfigError("--delta must lie in (0, 1)");
    cfg.delta = o.delta;
    cfg.sweep.reset();
  }
  if (o.timings) cfg.outputs.timings = true;
  if (!o.branches.empty()) cfg.fields.branches = o.branches;
  return cfg;
}

Execution execution(const Options& o) {
  omp_set_num_threads(std::max(1, o.threads));
  return o.threads > 1 ? Execution::parallel : Execution::serial;
}

std::string out_path(const Options& o, const std::string& name) {
  std::filesystem::create_directories(o.out);
  return (std::filesystem::path(o.out) / name).string();
}

void print_summary(const SolverReport& rep) {
  std::printf("%-4s %-12s %-26s %-12s\n", "id", "class", "omega", "sigma_min");
  const auto numbered = io::numbered_branches(rep);
  for (std::size_t k = 0; k < numbered.size(); ++k) {
    const auto& b = *numbered[k];
    std::printf("%-4zu %-12s % .10e %+.10ei %.3e\n", k + 1, to_string(b.branch_class).c_str(), b.omega.real(),
                b.omega.imag(), b.sigma_min);
  }
  if (!rep.spurious.empty() || !rep.duplicate.empty())
    std::printf("rejected: %zu spurious, %zu duplicate\n", rep.spurious.size(), rep.duplicate.size());
}

int run_resonances(const Options& o) {
  const auto cfg = load(o);
  auto st = cfg.solver;
  st.exec = execution(o);
  const auto sys = cfg.system();
  const auto rep = solve(sys, st, stage_from_string(o.stage));
  const auto path = out_path(o, "report.json");
  io::write_text(path, io::report_json(rep, sys, cfg.outputs.timings).dump(2) + "\n");
  print_summary(rep);
  std::printf("report: %s\n", path.c_str());
  return cmd::exit_code(rep);
}

int run_converge(const Options& o, bool in_f) {
  const auto cfg = load(o);
  const auto exec = execution(o);
  const auto table = in_f ? cmd::converge_in_f(cfg, exec) : cmd::converge_in_delta(cfg, exec);
  const auto path = out_path(o, in_f ? "convergence_F.csv" : "convergence_delta.csv");
  const auto text = table.csv();
  io::write_text(path, text);
  std::fputs(text.c_str(), stdout);
  return cmd::kSuccess;
}

int run_modes(const Options& o) {
  const auto cfg = load(o);
  auto st = cfg.solver;
  st.exec = execution(o);
  const auto sys = cfg.system();
  const auto rep = solve(sys, st);
  const auto files = cmd::write_modes(cfg, rep, sys, o.out, st.exec);
  for (const auto& f : files.files) std::printf("%s\n", f.c_str());
  std::printf("manifest: %s\n", (std::filesystem::path(o.out) / files.manifest).string().c_str());
  return cmd::exit_code(rep);
}

int run_bench(const Options& o) {
  const auto cfg = load(o);
  const auto rows = cmd::scaling_table(o.sizes, cfg.F, cfg.primary_delta(), execution(o), o.repeats);
  const auto text = cmd::scaling_csv(rows);
  io::write_text(out_path(o, "bench_assembly.csv"), text);
  std::fputs(text.c_str(), stdout);
  return cmd::kSuccess;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Subwavelength resonances of 2D resonator systems"};
  app.require_subcommand(1);
  Options o;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config, "configuration file (JSON)")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", o.out, "output directory");
    sub->add_option("--f", o.F, "Fourier truncation order override")->check(CLI::NonNegativeNumber);
    sub->add_option("--delta", o.delta, "contrast override (disables sweeps)");
    sub->add_option("--stage", o.stage, "last stage to run")->check(CLI::IsMember({"seed", "effective", "refined"}));
    sub->add_option("--threads", o.threads, "OpenMP threads")->check(CLI::PositiveNumber);
    sub->add_flag("--timings", o.timings, "include wall-clock timings in reports");
  };
  auto* res = app.add_subcommand("resonances", "seed, effective and refined resonances");
  auto* cf = app.add_subcommand("converge-f", "error table against F_ref");
  auto* cd = app.add_subcommand("converge-delta", "seed and effective errors over a delta sweep");
  auto* modes = app.add_subcommand("modes", "near-field grids of selected branches");
  auto* bench = app.add_subcommand("bench-assembly", "runtime scaling of the effective and full paths");
  for (auto* s : {res, cf, cd, modes, bench}) common(s);
  modes->add_option("--branch", o.branches, "1-based branch ids (default: all)");
  bench->add_option("--sizes", o.sizes, "resonator counts")->check(CLI::PositiveNumber);
  bench->add_option("--repeats", o.repeats, "best-of repeats")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : cmd::kConfigError;
  }

  try {
    if (*res) return run_resonances(o);
    if (*cf) return run_converge(o, true);
    if (*cd) return run_converge(o, false);
    if (*modes) return run_modes(o);
    if (*bench) return run_bench(o);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return cmd::kConfigError;
  } catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cmd::kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "solver failure: " << e.what() << '\n';
    return cmd::kTotalFailure;
  }
  return cmd::kSuccess;
}
