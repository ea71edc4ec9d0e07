#include <cmath>
#include <vector>

#include <benchmark/benchmark.h>

#include "swlab/lemma_lab.hpp"
#include "swlab/mixed_norm.hpp"
#include "swlab/sio.hpp"

namespace {

using namespace swlab;

double gaussian(std::span<const double> x) {
  double r2 = 0.0;
  for (double v : x) r2 += v * v;
  return std::exp(-r2);
}

KernelSpec riesz_e1() {
  const double theta[2] = {1.0, 0.0};
  return riesz(2, theta);
}

void BM_ApplySpectral(benchmark::State& state) {
  const auto m = static_cast<int>(state.range(0));
  const GridFunction f = sample(gaussian, build_cartesian_grid(2, 12.0, m));
  const KernelSpec k = riesz_e1();
  for (auto _ : state) benchmark::DoNotOptimize(apply_spectral(k, f).imaginary_residue);
  state.SetComplexityN(static_cast<int64_t>(m) * m);
}
BENCHMARK(BM_ApplySpectral)->RangeMultiplier(2)->Range(128, 1024)->Unit(benchmark::kMillisecond)->Complexity();

void BM_MixedNorm(benchmark::State& state) {
  const auto nr = static_cast<int>(state.range(0));
  const GridFunction f = sample(gaussian, build_polar_grid(2, 1e-3, 11.0, nr, nr / 2));
  const NormParams np{2.0, 4.0, 0.5, 2};
  for (auto _ : state) benchmark::DoNotOptimize(weighted_mixed_norm(f, np));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(f.size()));
}
BENCHMARK(BM_MixedNorm)->RangeMultiplier(2)->Range(128, 1024);

void BM_SphereKernelIntegral(benchmark::State& state) {
  const double rho = 1.0 - std::pow(10.0, -static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(sphere_kernel_integral(rho, 2));
}
BENCHMARK(BM_SphereKernelIntegral)->DenseRange(1, 5);

void BM_YoungBoundConstant(benchmark::State& state) {
  LemmaParams lp;
  lp.alpha = 0.5;
  for (auto _ : state) benchmark::DoNotOptimize(young_bound_constant(lp, 1e-6, 1e6).B);
}
BENCHMARK(BM_YoungBoundConstant)->Unit(benchmark::kMillisecond);

void BM_ApplyPvDirect(benchmark::State& state) {
  const std::vector<Vec3> pts{{0.7, 0.2, 0.0}};
  const KernelSpec k = riesz_e1();
  const auto res = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(apply_pv_direct(k, gaussian, pts, 1e-4, 20.0, res).values[0]);
}
BENCHMARK(BM_ApplyPvDirect)->RangeMultiplier(2)->Range(16, 128)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
