#include <benchmark/benchmark.h>

#include "scenestat/complexity/bdm.h"
#include "scenestat/complexity/ctm.h"
#include "scenestat/complexity/turing.h"
#include "scenestat/grid/frequency_table.h"
#include "scenestat/grid/patches.h"
#include "scenestat/pipeline/synthetic.h"
#include "scenestat/random.h"
#include "scenestat/stats/regression.h"

namespace {

using namespace scenestat;

const std::vector<grid::GrayImage>& corpus() {
  static const auto images = pipeline::synthetic_corpus({});
  return images;
}

void BM_ScanCorpus(benchmark::State& state) {
  const auto mode = state.range(1) ? grid::ExtractionMode::kSliding : grid::ExtractionMode::kTiled;
  corpus();
  for (auto _ : state) {
    auto t = grid::scan_corpus(corpus(), static_cast<int>(state.range(0)), mode, 1);
    benchmark::DoNotOptimize(t.total());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(corpus().size()));
}
BENCHMARK(BM_ScanCorpus)->Args({4, 0})->Args({4, 1})->Args({2, 1})->Unit(benchmark::kMillisecond);

void BM_RunMachine(benchmark::State& state) {
  Rng rng(5);
  std::vector<complexity::TuringMachine2D> machines;
  for (int i = 0; i < 1024; ++i) machines.push_back(complexity::TuringMachine2D::random(4, rng));
  complexity::MachineRunner runner(static_cast<std::uint64_t>(state.range(0)));
  std::size_t i = 0;
  for (auto _ : state) {
    auto r = runner.run(machines[i++ % machines.size()], 2);
    benchmark::DoNotOptimize(r.steps);
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_RunMachine)->Arg(500)->Arg(5000);

void BM_SampleOutputs(benchmark::State& state) {
  auto params = complexity::canonical_sampler_params();
  params.n_samples = 100'000;
  for (auto _ : state) {
    auto f = complexity::sample_outputs(params, 1);
    benchmark::DoNotOptimize(f.total_hits);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(params.n_samples));
}
BENCHMARK(BM_SampleOutputs)->Unit(benchmark::kMillisecond);

void BM_Bdm(benchmark::State& state) {
  auto params = complexity::canonical_sampler_params();
  params.n_samples = 100'000;
  const auto table = complexity::sample_ctm(params);
  const int side = static_cast<int>(state.range(0));
  Rng rng(9);
  std::vector<std::uint8_t> cells(static_cast<std::size_t>(side) * side);
  for (auto& c : cells) c = static_cast<std::uint8_t>(rng.below(2));
  const grid::BitGrid g(side, side, cells);
  for (auto _ : state) benchmark::DoNotOptimize(complexity::bdm(g, table));
}
BENCHMARK(BM_Bdm)->Arg(4)->Arg(64)->Arg(256);

void BM_Ols(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Rng rng(3);
  std::vector<double> y(n), x1(n), x2(n);
  for (std::size_t i = 0; i < n; ++i) {
    x1[i] = rng.normal();
    x2[i] = rng.normal();
    y[i] = 0.5 * x1[i] - 0.2 * x2[i] + rng.normal();
  }
  const std::vector<std::vector<double>> predictors = {x1, x2};
  for (auto _ : state) benchmark::DoNotOptimize(stats::ols(y, predictors).coefficients);
}
BENCHMARK(BM_Ols)->Arg(100)->Arg(10'000);

}  // namespace
BENCHMARK_MAIN();
