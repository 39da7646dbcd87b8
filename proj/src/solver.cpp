#include "subres/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include "subres/errors.hpp"

namespace subres {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct EigenPair {
  cplx lambda;  // omega^2
  CVector vec;
};

// Eigenpairs of A0 c + lambda M c = 0 with the `keep` smallest |lambda|.
std::vector<EigenPair> linearized_pairs(const EffectiveMatrices& eff, double delta, cplx log_omega, int keep) {
  const CMatrix A0 = (1.0 - delta) * eff.C0 - delta * eff.gram;
  const CMatrix M = -(log_omega * eff.K1 + eff.K2);
  Eigen::PartialPivLU<CMatrix> lu(A0);
  const CMatrix X = lu.solve(M);
  Eigen::ComplexEigenSolver<CMatrix> es(X);
  if (es.info() != Eigen::Success) throw NumericalError("effective stage: eigen-decomposition failed");
  const auto& kap = es.eigenvalues();
  std::vector<int> order(kap.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return std::abs(kap(a)) > std::abs(kap(b)); });
  std::vector<EigenPair> out;
  for (int k = 0; k < keep && k < static_cast<int>(order.size()); ++k) {
    const cplx kv = kap(order[k]);
    if (kv == cplx(0.0)) break;
    CVector v = es.eigenvectors().col(order[k]);
    out.push_back({-1.0 / kv, v / v.norm()});
  }
  return out;
}

cplx root(cplx lambda) {
  cplx w = std::sqrt(lambda);
  if (w.real() < 0.0) w = -w;
  return w;
}

double overlap(const CVector& a, const CVector& b) { return std::abs(a.dot(b)) / (a.norm() * b.norm()); }

// Greedy maximum-overlap assignment of targets to candidate pairs. Near ties
// (within 10%) go to the candidate closest in |omega|.
std::vector<int> match(const std::vector<CVector>& targets, const std::vector<cplx>& target_omega,
                       const std::vector<EigenPair>& pairs) {
  const int T = static_cast<int>(targets.size()), P = static_cast<int>(pairs.size());
  std::vector<int> assign(T, -1);
  std::vector<bool> used(P, false);
  RMatrix ov(T, P);
  for (int t = 0; t < T; ++t)
    for (int p = 0; p < P; ++p) ov(t, p) = overlap(targets[t], pairs[p].vec);
  for (int round = 0; round < std::min(T, P); ++round) {
    int bt = -1, bp = -1;
    double best = -1.0;
    for (int t = 0; t < T; ++t) {
      if (assign[t] >= 0) continue;
      for (int p = 0; p < P; ++p)
        if (!used[p] && ov(t, p) > best) {
          best = ov(t, p);
          bt = t;
          bp = p;
        }
    }
    if (bt < 0) break;
    double dist = std::abs(std::abs(root(pairs[bp].lambda)) - std::abs(target_omega[bt]));
    for (int p = 0; p < P; ++p) {
      if (used[p] || ov(bt, p) < 0.9 * best) continue;
      const double d = std::abs(std::abs(root(pairs[p].lambda)) - std::abs(target_omega[bt]));
      if (d < dist) {
        dist = d;
        bp = p;
      }
    }
    assign[bt] = bp;
    used[bp] = true;
  }
  return assign;
}

// Boundary trace S phi_int in the normalized basis.
CVector boundary_trace(const ResonatorSystem& sys, const CMatrix& A, const CVector& density) {
  const int h = static_cast<int>(A.rows()) / 2;
  const CMatrix G = gram_matrix(sys);
  CVector a = G.partialPivLu().solve(A.topLeftCorner(h, h) * density.head(h));
  const int M = sys.modes();
  for (int i = 0; i < sys.size(); ++i) a.segment(i * M, M) *= std::sqrt(sys.curves[i].perimeter());
  return a;
}

}  // namespace

std::string to_string(Stage s) {
  switch (s) {
    case Stage::seed:
      return "seed";
    case Stage::effective:
      return "effective";
    case Stage::refined:
      return "refined";
  }
  return "unknown";
}

Stage stage_from_string(const std::string& s) {
  if (s == "seed") return Stage::seed;
  if (s == "effective") return Stage::effective;
  if (s == "refined") return Stage::refined;
  throw ConfigError("unknown stage '" + s + "' (expected seed, effective or refined)");
}

const std::vector<ResonanceBranch>& SolverReport::result() const {
  switch (final_stage) {
    case Stage::seed:
      return seed_branches;
    case Stage::effective:
      return effective_branches;
    case Stage::refined:
      break;
  }
  return accepted;
}

void normalize_phase(CVector& v) {
  const double n = v.norm();
  if (n == 0.0) return;
  v /= n;
  Eigen::Index k = 0;
  v.cwiseAbs().maxCoeff(&k);
  v *= std::conj(v(k)) / std::abs(v(k));
  v(k) = cplx(v(k).real(), 0.0);
}

cplx cap_step(cplx step, cplx omega) {
  const double lim = 0.5 * std::abs(omega);
  const double s = std::abs(step);
  return s > lim ? step * (lim / s) : step;
}

std::vector<ResonanceBranch> seed_branches(const BranchSeeds& seeds, int F) {
  const auto vecs = seeds.galerkin_vectors(F);
  std::vector<ResonanceBranch> out;
  for (int k = 0; k < seeds.count(); ++k) {
    ResonanceBranch b;
    b.omega = seeds.omega(k);
    b.branch_class = seeds.branch_class(k);
    b.stage = Stage::seed;
    b.seed_index = k;
    b.mode_coeffs = vecs[k];
    normalize_phase(b.mode_coeffs);
    out.push_back(std::move(b));
  }
  return out;
}

std::vector<ResonanceBranch> effective_stage(const EffectiveMatrices& eff, const BranchSeeds& seeds, double delta,
                                             const SolverSettings& settings, bool* converged, int* iterations) {
  const int N = seeds.count();
  auto branches = seed_branches(seeds, eff.F);
  std::vector<CVector> targets;
  std::vector<cplx> omegas;
  for (const auto& b : branches) {
    targets.push_back(b.mode_coeffs);
    omegas.push_back(b.omega);
  }
  const auto mean_abs = [](const std::vector<cplx>& w) {
    double s = 0.0;
    for (cplx x : w) s += std::abs(x);
    return s / static_cast<double>(w.size());
  };

  double w0 = mean_abs(omegas);
  bool ok = false;
  int it = 0;
  std::vector<CVector> vecs = targets;
  for (; it < settings.max_fixed_point && !ok; ++it) {
    const auto pairs = linearized_pairs(eff, delta, cplx(std::log(w0), 0.0), N);
    const auto assign = match(targets, omegas, pairs);
    std::vector<cplx> next = omegas;
    for (int k = 0; k < N; ++k) {
      if (assign[k] < 0) continue;
      next[k] = root(pairs[assign[k]].lambda);
      vecs[k] = pairs[assign[k]].vec;
    }
    const double w1 = mean_abs(next);
    omegas = next;
    ok = std::abs(w1 - w0) < settings.eps_rel * w0;
    w0 = w1;
  }
  if (converged) *converged = ok;
  if (iterations) *iterations = it;
  if (!ok) {
    for (auto& b : branches) b.note = "effective fixed point did not converge; seed retained";
    return branches;
  }

  for (int k = 0; k < N; ++k) {
    auto& b = branches[k];
    b.stage = Stage::effective;
    b.omega = omegas[k];
    b.mode_coeffs = vecs[k];
    b.iterations = it;
    if (settings.branch_polish) {
      bool done = false;
      int pit = 0;
      for (; pit < settings.max_fixed_point && !done; ++pit) {
        const auto pairs = linearized_pairs(eff, delta, std::log(b.omega), N);
        const auto a = match({b.mode_coeffs}, {b.omega}, pairs);
        if (a[0] < 0) break;
        const cplx w = root(pairs[a[0]].lambda);
        done = std::abs(w - b.omega) < settings.eps_rel * std::abs(b.omega);
        b.omega = w;
        b.mode_coeffs = pairs[a[0]].vec;
      }
      b.iterations += pit;
      if (!done) b.note = "per-branch polish did not converge";
    }
    normalize_phase(b.mode_coeffs);
  }
  return branches;
}

CMatrix equilibrated_A(const ResonatorSystem& sys, cplx omega, Execution exec) {
  CMatrix A = assemble_A(sys, omega, exec).A;
  for (Eigen::Index r = 0; r < A.rows(); ++r) {
    const double m = A.row(r).cwiseAbs().maxCoeff();
    if (m > 0.0) A.row(r) /= m;
  }
  return A;
}

ResonanceBranch newton_refine(const ResonatorSystem& sys, cplx omega_start, const SolverSettings& settings) {
  if (omega_start == cplx(0.0)) throw DomainError("newton_refine: omega = 0");
  ResonanceBranch b;
  b.stage = Stage::refined;
  b.converged = false;
  cplx w = omega_start;
  int it = 0;
  for (; it < settings.max_newton; ++it) {
    const CMatrix A = assemble_A(sys, w).A;
    RVector d(A.rows());
    for (Eigen::Index r = 0; r < A.rows(); ++r) {
      const double m = A.row(r).cwiseAbs().maxCoeff();
      d(r) = m > 0.0 ? 1.0 / m : 1.0;
    }
    const CMatrix DA = d.asDiagonal() * A;
    const auto t = smallest_singular(DA);
    const double h = settings.fd_step * std::abs(w);
    const CMatrix Ap = assemble_A(sys, w + h).A;
    const CMatrix Am = assemble_A(sys, w - h).A;
    const CVector dAv = d.asDiagonal() * ((Ap - Am) * t.v) / (2.0 * h);
    const cplx g = t.u.dot(DA * t.v);
    const cplx gp = t.u.dot(dAv);
    if (std::abs(gp) < 1e-300 || !std::isfinite(std::abs(gp))) {
      b.note = "Newton stagnated: derivative of the Rayleigh quotient vanished";
      break;
    }
    const cplx step = cap_step(-g / gp, w);
    w += step;
    if (std::abs(step) < settings.eps_rel * std::abs(w)) {
      b.converged = true;
      ++it;
      break;
    }
  }
  if (!b.converged && b.note.empty()) b.note = "Newton iteration cap reached";
  b.omega = w;
  b.iterations = it;
  const CMatrix A = assemble_A(sys, w).A;
  RVector d(A.rows());
  for (Eigen::Index r = 0; r < A.rows(); ++r) {
    const double m = A.row(r).cwiseAbs().maxCoeff();
    d(r) = m > 0.0 ? 1.0 / m : 1.0;
  }
  const auto t = smallest_singular(d.asDiagonal() * A);
  b.sigma_min = t.sigma;
  b.density = t.v;
  normalize_phase(b.density);
  const CVector trace = boundary_trace(sys, A, b.density);
  b.mode_coeffs = trace;
  normalize_phase(b.mode_coeffs);
  // Rescale the densities so their single-layer trace is the mode expansion.
  Eigen::Index k = 0;
  trace.cwiseAbs().maxCoeff(&k);
  if (trace(k) != cplx(0.0)) b.density *= b.mode_coeffs(k) / trace(k);
  return b;
}

void accept_filter(std::vector<ResonanceBranch> candidates, double omega_scale, const SolverSettings& settings,
                   SolverReport& report) {
  std::stable_sort(candidates.begin(), candidates.end(), [](const ResonanceBranch& a, const ResonanceBranch& b) {
    const double ra = std::abs(a.omega), rb = std::abs(b.omega);
    if (ra != rb) return ra < rb;
    return std::arg(a.omega) < std::arg(b.omega);
  });
  const double eps_dist = settings.eps_dist_rel * omega_scale;
  for (auto& c : candidates) {
    if (!c.converged || !(c.sigma_min < settings.eps_sigma)) {
      if (c.note.empty()) c.note = "sigma_min above threshold";
      report.spurious.push_back(std::move(c));
      continue;
    }
    double dmin = 1e300;
    for (const auto& a : report.accepted) dmin = std::min(dmin, std::abs(a.omega - c.omega));
    if (!(dmin > eps_dist)) {
      c.note = "duplicate of an accepted branch";
      report.duplicate.push_back(std::move(c));
      continue;
    }
    report.accepted.push_back(std::move(c));
  }
}

SolverReport solve(const ResonatorSystem& sys, const SolverSettings& settings, Stage final_stage) {
  SolverReport rep;
  rep.delta = sys.delta;
  rep.N = sys.size();
  rep.F = sys.F;
  rep.final_stage = final_stage;

  auto t0 = Clock::now();
  const auto eff = assemble_effective(sys, settings.exec);
  const auto cap = capacitance_F0(sys, eff);
  rep.seeds = compute_seeds(cap, sys.delta);
  rep.seed_branches = seed_branches(rep.seeds, sys.F);
  rep.timings.seed = seconds_since(t0);
  if (final_stage == Stage::seed) return rep;

  t0 = Clock::now();
  rep.effective_branches =
      effective_stage(eff, rep.seeds, sys.delta, settings, &rep.effective_converged, &rep.fixed_point_iterations);
  rep.timings.effective = seconds_since(t0);
  if (final_stage == Stage::effective) return rep;

  t0 = Clock::now();
  const int n = static_cast<int>(rep.effective_branches.size());
  std::vector<ResonanceBranch> refined(n);
#pragma omp parallel for schedule(dynamic) if (settings.exec == Execution::parallel)
  for (int k = 0; k < n; ++k) {
    const auto& start = rep.effective_branches[k];
    ResonanceBranch r;
    try {
      r = newton_refine(sys, start.omega, settings);
    } catch (const Error& e) {
      r.omega = start.omega;
      r.stage = Stage::refined;
      r.converged = false;
      r.sigma_min = 1.0;
      r.note = e.what();
    }
    r.branch_class = start.branch_class;
    r.seed_index = start.seed_index;
    refined[k] = std::move(r);
  }
  double scale = 0.0;
  for (int k = 0; k < rep.seeds.count(); ++k) scale += std::abs(rep.seeds.omega(k));
  scale /= rep.seeds.count();
  accept_filter(std::move(refined), scale, settings, rep);
  rep.timings.refined = seconds_since(t0);
  return rep;
}

}  // namespace subres
