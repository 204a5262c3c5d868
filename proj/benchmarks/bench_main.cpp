#include "lpinn/allocator.hpp"
#include "lpinn/fft.hpp"
#include "lpinn/objective.hpp"
#include "lpinn/reference.hpp"

#include <benchmark/benchmark.h>

#include <cmath>
#include <numeric>
#include <random>

using namespace lpinn;

namespace {

CollocationSet grid_256x100() {
  return make_collocation(256, 100, {}, Expression("sin(x)"));
}

std::vector<std::size_t> first_n(std::size_t n) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  return idx;
}

template <typename M>
void objective_gradient(benchmark::State& state, M model) {
  const Objective obj(model, PdeSpec::convection(30), grid_256x100());
  const ParamVector p = init_params(obj.model(), 0);
  const auto idx = first_n(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(obj.evaluate(p, idx, true));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_PinnGradient(benchmark::State& state) { objective_gradient(state, PinnModel{}); }
void BM_LpinnGradient(benchmark::State& state) { objective_gradient(state, LpinnModel{}); }

void BM_PinnLossOnly(benchmark::State& state) {
  const Objective obj(PinnModel{}, PdeSpec::convection(30), grid_256x100());
  const ParamVector p = init_params(obj.model(), 0);
  const auto idx = first_n(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(obj.loss(p, idx));
}

void BM_Fft(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  FftPlan plan(n);
  std::mt19937_64 rng(1);
  std::normal_distribution<double> d;
  std::vector<Complex> a(n);
  for (auto& v : a) v = {d(rng), 0.0};
  for (auto _ : state) {
    plan.forward(a);
    benchmark::DoNotOptimize(a.data());
  }
}

void BM_BurgersStep(benchmark::State& state) {
  for (auto _ : state) {
    BurgersSpectralSolver s([](double x) { return std::sin(x) + 30.0; }, 0.01,
                            2.0 * M_PI);
    s.advance_to(0.01);
    benchmark::DoNotOptimize(s.mean());
  }
}

}  // namespace

BENCHMARK(BM_PinnGradient)->Arg(256)->Arg(2048)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LpinnGradient)->Arg(256)->Arg(2048)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PinnLossOnly)->Arg(2048)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Fft)->Arg(512)->Arg(4096);
BENCHMARK(BM_BurgersStep)->Unit(benchmark::kMillisecond);

int main(int argc, char** argv) {
  keep_freed_memory();
  benchmark::Initialize(&argc, argv);
  if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
  benchmark::RunSpecifiedBenchmarks();
  benchmark::Shutdown();
  return 0;
}
