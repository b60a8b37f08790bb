#include "fsvm/filter_svm.hpp"
#include "fsvm/harness.hpp"
#include "fsvm/signal.hpp"
#include "fsvm/svm.hpp"
#include "fsvm/toy.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace fsvm;

std::pair<SignalMatrix, LabelSequence> bench_toy(int nbtot, int nbrel, double sigma,
                                                 int n) {
  ToySpec spec;
  spec.nbtot = nbtot;
  spec.nbrel = nbrel;
  spec.sigma = sigma;
  spec.n_samples = n;
  spec.seed = 7;
  return generate_toy(spec);
}

void FilterApply(benchmark::State& state) {
  const auto [x, y] = bench_toy(32, 4, 1.0, static_cast<int>(state.range(0)));
  const FilterBank fb = FilterBank::uniform(21, 32, 11);
  for (auto _ : state) {
    auto filtered = filter_apply(x, fb);
    benchmark::DoNotOptimize(filtered.data.data());
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(FilterApply)->RangeMultiplier(4)->Range(1 << 10, 1 << 14)->Complexity();

void VectorizeWindows(benchmark::State& state) {
  const auto [x, y] = bench_toy(32, 4, 1.0, 4096);
  for (auto _ : state) {
    auto z = vectorize_windows(x, state.range(0), static_cast<int>(state.range(0)) / 2);
    benchmark::DoNotOptimize(z.data());
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(VectorizeWindows)->RangeMultiplier(2)->Range(4, 32)->Complexity();

void TrainL2Svm(benchmark::State& state) {
  const auto [x, y] = bench_toy(static_cast<int>(state.range(0)), 3, 2.0, 2000);
  SvmProblem problem{x.data, y, 1.0};
  for (auto _ : state) {
    auto sol = train_l2svm(problem);
    benchmark::DoNotOptimize(sol.objective_value);
  }
}
BENCHMARK(TrainL2Svm)->Arg(8)->Arg(32)->Arg(128);

// Per-Newton-step cost of the windowed trainer roughly quadruples when the
// window doubles.
void TrainWindowSvm(benchmark::State& state) {
  const auto [x, y] = bench_toy(4, 2, 1.0, 2000);
  for (auto _ : state) {
    auto model = train_window_svm(x, y, state.range(0), static_cast<int>(state.range(0)) / 2, 1.0);
    benchmark::DoNotOptimize(model.bias);
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(TrainWindowSvm)->RangeMultiplier(2)->Range(8, 32)->Complexity();

void TrainFilterSvm(benchmark::State& state) {
  const auto [x, y] = bench_toy(static_cast<int>(state.range(0)), 3, 2.0, 1000);
  for (auto _ : state) {
    auto model = train_filter_svm(x, y, 21, 11, 1.0, 1.0);
    benchmark::DoNotOptimize(model.model.bias);
  }
}
BENCHMARK(TrainFilterSvm)->Arg(8)->Arg(30);

void GenerateToy(benchmark::State& state) {
  for (auto _ : state) {
    auto data = bench_toy(30, 3, 3.0, static_cast<int>(state.range(0)));
    benchmark::DoNotOptimize(data.first.data.data());
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(GenerateToy)->RangeMultiplier(4)->Range(1 << 10, 1 << 14)->Complexity();

}  // namespace

BENCHMARK_MAIN();
