// Hot paths: the Hermitian exponential behind every substep, a full stroke
// build, displacement matrix elements, and a population fit.
#include "qotto/dynamics.hpp"
#include "qotto/engine.hpp"
#include "qotto/thermometry.hpp"

#include <benchmark/benchmark.h>

using namespace qotto;

static void BM_HermitianExponential(benchmark::State& state) {
  const hilbert::FockSpace space{static_cast<int>(state.range(0)), hilbert::kDefaultGuardLevels};
  const drive::HamiltonianTerms terms(space);
  const drive::EngineParams params;
  const Matrix h = drive::interaction_hamiltonian(terms, params, drive::DriveProfile::from(params), 30.0, true);
  for (auto _ : state) benchmark::DoNotOptimize(dynamics::hermitian_exponential(h, 0.01));
  state.SetLabel("dim " + std::to_string(space.dim()));
}
BENCHMARK(BM_HermitianExponential)->Arg(6)->Arg(15)->Arg(30);

static void BM_StrokeBuild(benchmark::State& state) {
  const hilbert::FockSpace space{6, hilbert::kDefaultGuardLevels};
  drive::EngineParams params;
  params.tau = 12.0;
  engine::CycleOptions options;
  options.with_cd = true;
  options.step.method = state.range(0) ? dynamics::Method::magnus4 : dynamics::Method::exponential_midpoint;
  for (auto _ : state) {
    engine::Engine eng(space, params, options);
    benchmark::DoNotOptimize(eng.stroke_unitary(drive::Stroke::expansion));
  }
  state.SetLabel(std::string(dynamics::to_string(options.step.method)));
}
BENCHMARK(BM_StrokeBuild)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

static void BM_DisplacementElement(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(hilbert::displacement_element(n + 1, n, 0.05));
}
BENCHMARK(BM_DisplacementElement)->Arg(0)->Arg(20)->Arg(200);

static void BM_PopulationFit(benchmark::State& state) {
  const auto scan = thermometry::ThermometryScan::default_grid(6.283185307179586 * 0.02, 0.05);
  const auto signal = thermometry::synthesize_signal(thermometry::thermal_distribution(2.9, 200), scan);
  thermometry::FitPolicy policy;
  policy.forced_n_max = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(thermometry::fit_populations(signal, scan, policy));
}
BENCHMARK(BM_PopulationFit)->Arg(9)->Arg(19);

static void BM_Bootstrap(benchmark::State& state) {
  const auto scan = thermometry::ThermometryScan::default_grid(6.283185307179586 * 0.02, 0.05);
  const auto signal = thermometry::synthesize_signal(thermometry::thermal_distribution(2.9, 200), scan);
  const auto fit = thermometry::fit_populations(signal, scan);
  for (auto _ : state) benchmark::DoNotOptimize(thermometry::bootstrap_errors(signal, scan, fit, {}, 50, 3, 1));
}
BENCHMARK(BM_Bootstrap)->Unit(benchmark::kMillisecond);

// The packaged benchmark_main archive is not portable across compiler
// patch releases, so the entry point lives here.
BENCHMARK_MAIN();
