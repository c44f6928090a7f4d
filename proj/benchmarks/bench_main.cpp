#include <benchmark/benchmark.h>

#include "cfdim/chebyshev.hpp"
#include "cfdim/digit_stream.hpp"
#include "cfdim/fractal.hpp"
#include "cfdim/measure.hpp"
#include "cfdim/pressure.hpp"
#include "cfdim/transfer.hpp"

using namespace cfdim;

static void BM_TransferBuild(benchmark::State& state) {
  const ChebyshevGrid grid(static_cast<std::size_t>(state.range(0)));
  const auto cap = static_cast<cf::Digit>(state.range(1));
  for (auto _ : state) {
    TransferOperator op(grid, 0.75, {{}, cap, TailMode::zeta, 1});
    benchmark::DoNotOptimize(op.matrix().data());
  }
}
BENCHMARK(BM_TransferBuild)->Args({64, 2000})->Args({128, 10000})->Unit(benchmark::kMillisecond);

static void BM_PressureEigen(benchmark::State& state) {
  const EigenOptions o{static_cast<std::size_t>(state.range(0)), 2000, TailMode::zeta, 1e-12, 10000, 1};
  for (auto _ : state) benchmark::DoNotOptimize(pressure_eigen(0.8, o).value);
}
BENCHMARK(BM_PressureEigen)->Arg(48)->Arg(96)->Unit(benchmark::kMillisecond);

static void BM_GaussStream(benchmark::State& state) {
  std::uint64_t stream = 0;
  for (auto _ : state) {
    GaussDigitStream s(1, stream++);
    cf::Digit acc = 0;
    for (int k = 0; k < 1000; ++k) acc += s.next();
    benchmark::DoNotOptimize(acc);
  }
  state.SetItemsProcessed(state.iterations() * 1000);
}
BENCHMARK(BM_GaussStream);

static void BM_IidStream(benchmark::State& state) {
  IidGaussKuzminStream s(1, 0);
  for (auto _ : state) benchmark::DoNotOptimize(s.next());
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_IidStream);

static void BM_TupleCount(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const int r = static_cast<int>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(count_separated_tuples(m, r).count.get_ui());
}
BENCHMARK(BM_TupleCount)->Args({16, 2})->Args({20, 3})->Unit(benchmark::kMillisecond);

static void BM_ExactEvent(benchmark::State& state) {
  const EventSpec spec{{1, 2}, 2.0};
  for (auto _ : state) benchmark::DoNotOptimize(event_measure_exact(spec, static_cast<cf::Digit>(state.range(0))).upper);
}
BENCHMARK(BM_ExactEvent)->Arg(10000)->Arg(1000000)->Unit(benchmark::kMillisecond);

static void BM_CoverSum(benchmark::State& state) {
  const auto spec = CantorSpec::uniform(1, 10, 50);
  for (auto _ : state) benchmark::DoNotOptimize(cover_sum(spec, 6, 0.5, 1));
}
BENCHMARK(BM_CoverSum)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
