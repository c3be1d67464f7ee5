#include <benchmark/benchmark.h>

#include <memory>

#include "rankload/analysis.hpp"
#include "rankload/synth.hpp"

namespace {

using namespace rankload;

const Stream& day_stream() {
  static const Stream stream = generate_stream({.seed = 3, .duration_minutes = 25 * 60});
  return stream;
}

void BM_GenerateStream(benchmark::State& state) {
  SynthConfig config;
  config.seed = 7;
  config.duration_minutes = state.range(0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(generate_stream(config));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_GenerateStream)->Arg(60)->Arg(1440);

void BM_BuildMatrixHour(benchmark::State& state) {
  const Stream& stream = day_stream();
  const TimeWindow horizon{stream.span_start() + 23 * 3600, stream.span_start() + 24 * 3600};
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_rw_matrix(stream, horizon, MetricKind::recall_at_k));
  }
}
BENCHMARK(BM_BuildMatrixHour);

void BM_BuildMatrixDay(benchmark::State& state) {
  const Stream& stream = day_stream();
  const TimeWindow horizon{stream.span_start(), stream.span_start() + 24 * 3600};
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_rw_matrix(stream, horizon, MetricKind::recall_at_k));
  }
}
BENCHMARK(BM_BuildMatrixDay);

void BM_ParetoFront(benchmark::State& state) {
  const Stream& stream = day_stream();
  const RwMatrix matrix = build_rw_matrix(
      stream, {stream.span_start(), stream.span_start() + 24 * 3600}, MetricKind::recall_at_k);
  const double epsilon = static_cast<double>(state.range(0)) / 100.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(pareto_front(matrix, epsilon));
  }
}
BENCHMARK(BM_ParetoFront)->Arg(0)->Arg(5);

void BM_RealtimeRun(benchmark::State& state) {
  auto stream = std::make_shared<const Stream>(
      generate_stream({.seed = 5, .duration_minutes = 3 * 60}));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        run_scheme(stream, SchemeConfig::realtime(), MetricKind::recall_at_k, 0.6));
  }
}
BENCHMARK(BM_RealtimeRun);

}  // namespace

BENCHMARK_MAIN();
