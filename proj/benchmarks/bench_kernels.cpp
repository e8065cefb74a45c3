#include <benchmark/benchmark.h>

#include "emhd/fft.hpp"
#include "emhd/littlewood_paley.hpp"
#include "emhd/model.hpp"
#include "emhd/random_fields.hpp"
#include "emhd/spectral_ops.hpp"
#include "emhd/stepper.hpp"

namespace {

emhd::SpectralVectorField sample(int n) {
  const emhd::Grid3 g(n);
  return emhd::random_band_field(g, 7, 1, g.dealias_cutoff());
}

void BM_RoundTrip(benchmark::State& state) {
  const auto F = sample(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(emhd::forward_transform(emhd::inverse_transform(F)));
}
BENCHMARK(BM_RoundTrip)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_HallTerm(benchmark::State& state) {
  const auto B = sample(static_cast<int>(state.range(0)));
  const emhd::ModelParams p{0.2, 2.0, 1.0, 0.0};
  for (auto _ : state) benchmark::DoNotOptimize(emhd::hall_nonlinearity(B, B, p));
}
BENCHMARK(BM_HallTerm)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_EtdStep(benchmark::State& state) {
  const auto B = sample(static_cast<int>(state.range(0)));
  const emhd::ModelParams p{0.0, 2.0, 1.0, 0.0};
  const emhd::QProvider self = [](double, const emhd::SpectralVectorField& b) { return b; };
  for (auto _ : state) benchmark::DoNotOptimize(emhd::etd_step(B, 0.0, 1e-3, self, p, emhd::Scheme::etd2rk));
}
BENCHMARK(BM_EtdStep)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_LpProject(benchmark::State& state) {
  const auto F = sample(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(emhd::lp_project(F, 2));
}
BENCHMARK(BM_LpProject)->Arg(32)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
