#include <benchmark/benchmark.h>
#include <omp.h>

#include <random>

#include "subres/commands.hpp"

using namespace subres;

namespace {

ResonatorSystem lattice(int N, int F) {
  return ResonatorSystem(cmd::lattice_circles(N), 1e-5, F, ResonatorSystem::auto_q(F));
}

std::vector<BoundaryCurve> mixed(int N) {
  std::vector<BoundaryCurve> c;
  for (int i = 0; i < N; ++i) {
    const Vec2 at(3.5 * (i % 4), 3.5 * (i / 4));
    if (i % 2 == 0)
      c.push_back(BoundaryCurve::ellipse(at, 1.1, 0.7, 0.3 * i));
    else
      c.push_back(BoundaryCurve::star(at, 0.9, 0.15, 5));
  }
  return c;
}

Execution mode(const benchmark::State& st) { return st.range(1) ? Execution::parallel : Execution::serial; }

void BM_FullMatrixCircles(benchmark::State& st) {
  const auto sys = lattice(static_cast<int>(st.range(0)), 3);
  for (auto _ : st) benchmark::DoNotOptimize(assemble_A(sys, cplx(2e-3, -1e-5), mode(st)).A.data());
}

void BM_FullMatrixQuadrature(benchmark::State& st) {
  const ResonatorSystem sys(mixed(static_cast<int>(st.range(0))), 1e-5, 3, 64);
  for (auto _ : st) benchmark::DoNotOptimize(assemble_A(sys, cplx(2e-3, -1e-5), mode(st)).A.data());
}

void BM_EffectiveMatrices(benchmark::State& st) {
  const auto sys = lattice(static_cast<int>(st.range(0)), 3);
  for (auto _ : st) benchmark::DoNotOptimize(assemble_effective(sys, mode(st)).K2.data());
}

void BM_DenseApply(benchmark::State& st) {
  const auto sys = lattice(static_cast<int>(st.range(0)), 8);
  const auto A = assemble_A(sys, cplx(0.3, -0.01));
  const CVector x = CVector::Random(A.A.rows());
  for (auto _ : st) benchmark::DoNotOptimize(CVector(A.A * x).data());
}

void BM_FastApply(benchmark::State& st) {
  const auto sys = lattice(static_cast<int>(st.range(0)), 8);
  const auto A = assemble_A(sys, cplx(0.3, -0.01));
  const CVector x = CVector::Random(A.A.rows());
  for (auto _ : st) benchmark::DoNotOptimize(apply_A_fast(sys, cplx(0.3, -0.01), x).data());
}

}  // namespace

// second argument: 0 serial, 1 OpenMP
BENCHMARK(BM_FullMatrixCircles)->ArgsProduct({{2, 8, 16}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FullMatrixQuadrature)->ArgsProduct({{2, 4, 8}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EffectiveMatrices)->ArgsProduct({{2, 8, 16}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DenseApply)->Arg(4)->Arg(8)->Arg(16)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_FastApply)->Arg(4)->Arg(8)->Arg(16)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
