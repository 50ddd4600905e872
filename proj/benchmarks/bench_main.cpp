#include <benchmark/benchmark.h>

#include <cmath>

#include "normsol/dual.hpp"
#include "normsol/fiber.hpp"
#include "normsol/functionals.hpp"
#include "normsol/landscape.hpp"
#include "normsol/solvers.hpp"

using namespace normsol;

namespace {

const ProblemParams kParams{3, 7.0, 3.0, 10.0, 2.0, 0.2059033941132121, 0.6168734174314425};

Profile gaussian(std::size_t n) {
  auto g = build_grid(3, 20.0, n);
  const Profile u = Profile::sample(g, [](double r) { return std::exp(-r * r); });
  return u.scaled(std::sqrt(kParams.mass / coefficients(u, kParams).mass));
}

void BM_Coefficients(benchmark::State& state) {
  const Profile u = gaussian(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(coefficients(u, kParams));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Coefficients)->RangeMultiplier(2)->Range(1000, 8000)->Complexity();

void BM_EnergyGradient(benchmark::State& state) {
  const Profile u = gaussian(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(energy_gradient(u, kParams));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_EnergyGradient)->RangeMultiplier(2)->Range(1000, 8000)->Complexity();

void BM_FiberPortrait(benchmark::State& state) {
  const FiberCoefficients c = coefficients(gaussian(2000), kParams);
  for (auto _ : state) benchmark::DoNotOptimize(fiber_portrait(c, kParams));
}
BENCHMARK(BM_FiberPortrait);

void BM_LandscapeReport(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(landscape_report(kParams));
}
BENCHMARK(BM_LandscapeReport);

void BM_EnvelopeGradient(benchmark::State& state) {
  const Profile u = gaussian(2000);
  for (auto _ : state) benchmark::DoNotOptimize(envelope_gradient(u, kParams));
}
BENCHMARK(BM_EnvelopeGradient);

void BM_SolveGround(benchmark::State& state) {
  auto g = build_grid(3, 20.0, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(solve_ground(kParams, g));
}
BENCHMARK(BM_SolveGround)->Arg(1000)->Arg(2000)->Arg(4000)->Unit(benchmark::kMillisecond);

void BM_SolveOneStep(benchmark::State& state) {
  auto g = build_grid(3, 20.0, 2000);
  const SolveResult r = solve_ground(kParams, g);
  SolveOptions one;
  one.max_iters = 1;
  for (auto _ : state) benchmark::DoNotOptimize(solve_ground(kParams, g, one, r.profile));
}
BENCHMARK(BM_SolveOneStep)->Unit(benchmark::kMillisecond);

void BM_SolveMountainPass(benchmark::State& state) {
  auto g = build_grid(3, 20.0, 2000);
  for (auto _ : state) benchmark::DoNotOptimize(solve_mountain_pass(kParams, g));
}
BENCHMARK(BM_SolveMountainPass)->Unit(benchmark::kMillisecond);

void BM_DualPhi(benchmark::State& state) {
  double w = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(dual_phi(w));
    w = w < 100.0 ? w + 0.37 : 0.0;
  }
}
BENCHMARK(BM_DualPhi);

void BM_Shoot(benchmark::State& state) {
  auto g = build_grid(3, 20.0, 2000);
  for (auto _ : state) benchmark::DoNotOptimize(shoot(1.3, kParams, g, 1e-3, 50.0));
}
BENCHMARK(BM_Shoot)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
