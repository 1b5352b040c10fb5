#include <benchmark/benchmark.h>

#include <alpha_patch/dynamics.hpp>
#include <alpha_patch/lemma_lab.hpp>
#include <alpha_patch/weak_form.hpp>

using namespace alpha_patch;

namespace {

ClosedCurve star(std::size_t n) {
  TestCurveParams p;
  p.n = n;
  return generate_test_curve(CurveKind::star, p);
}

void BM_BoundaryVelocity(benchmark::State& state) {
  const auto curve = star(static_cast<std::size_t>(state.range(0)));
  const KernelParams params(0.25);
  for (auto _ : state) benchmark::DoNotOptimize(boundary_velocity(curve, params));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_BoundaryVelocity)->RangeMultiplier(2)->Range(128, 2048)->Complexity(benchmark::oNSquared);

void BM_Rhs(benchmark::State& state) {
  const auto s = make_flow_state(star(static_cast<std::size_t>(state.range(0))));
  const KernelParams params(0.25);
  for (auto _ : state) benchmark::DoNotOptimize(rhs(s, params));
}
BENCHMARK(BM_Rhs)->Arg(256)->Arg(512);

void BM_Rk4Step(benchmark::State& state) {
  const auto s = make_flow_state(star(static_cast<std::size_t>(state.range(0))));
  const KernelParams params(0.25);
  for (auto _ : state) benchmark::DoNotOptimize(advance(s, 1e-4, StepScheme::rk4, params));
}
BENCHMARK(BM_Rk4Step)->Arg(256);

void BM_OracleVelocity(benchmark::State& state) {
  const auto curve = star(512);
  const KernelParams params(0.25);
  for (auto _ : state) benchmark::DoNotOptimize(oracle_velocity(curve, params, 17));
}
BENCHMARK(BM_OracleVelocity)->Unit(benchmark::kMillisecond);

void BM_MaximalFunction(benchmark::State& state) {
  ScalarField f(static_cast<std::size_t>(state.range(0)));
  for (std::size_t j = 0; j < f.size(); ++j) f[j] = static_cast<double>((j * 7919) % 101) - 50.0;
  for (auto _ : state) benchmark::DoNotOptimize(periodic_maximal_function(f, kTwoPi));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_MaximalFunction)->RangeMultiplier(4)->Range(64, 4096)->Complexity();

void BM_DsvHolder(benchmark::State& state) {
  const auto curve = arc_length_reparameterize(star(1024));
  HolderOptions opts;
  opts.refine = false;
  for (auto _ : state) benchmark::DoNotOptimize(verify_dsv_holder(curve, KernelParams(0.2), 1.0, opts));
}
BENCHMARK(BM_DsvHolder)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
