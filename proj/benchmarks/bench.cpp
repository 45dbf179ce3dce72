#include <benchmark/benchmark.h>

#include "chromplane/coloring.hpp"
#include "chromplane/exact_field.hpp"
#include "chromplane/graph.hpp"

namespace chromplane {
namespace {

void BM_SqDistance(benchmark::State& state) {
  const PlanePoint a = embed_quad({-2, 0, 0, -6});
  const PlanePoint b = embed_quad({8, 0, 0, 4});
  for (auto _ : state) benchmark::DoNotOptimize(sq_distance(a, b));
}
BENCHMARK(BM_SqDistance);

void BM_FieldSignEasy(benchmark::State& state) {
  const FieldElem v{7, 0, 0, -2};
  for (auto _ : state) benchmark::DoNotOptimize(field_sign(v));
}
BENCHMARK(BM_FieldSignEasy);

void BM_FieldSignNearZero(benchmark::State& state) {
  const FieldElem v{Rat(1351, 780), -1, 0, 0};
  for (auto _ : state) benchmark::DoNotOptimize(field_sign(v));
}
BENCHMARK(BM_FieldSignNearZero);

void BM_BuildG(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(build_G());
}
BENCHMARK(BM_BuildG)->Unit(benchmark::kMillisecond);

void BM_AssignUnassign(benchmark::State& state) {
  const TwoDistGraph g = build_H();
  const auto order = order_vertices(g, orbit_partition(g));
  SearchState s(g, 5);
  const int v = order.order[0];
  for (auto _ : state) {
    benchmark::DoNotOptimize(s.assign(v, 0));
    s.unassign(v, 0);
  }
}
BENCHMARK(BM_AssignUnassign);

// A fixed prefix of the G search, measured in nodes per second.
void BM_EnumerateGPrefix(benchmark::State& state) {
  const TwoDistGraph g = build_G();
  const auto order = order_vertices(g, orbit_partition(g));
  SearchConfig cfg;
  cfg.collect = false;
  cfg.node_limit = static_cast<std::uint64_t>(state.range(0));
  std::uint64_t nodes = 0;
  for (auto _ : state) nodes += enumerate_colorings(g, order, cfg).nodes;
  state.counters["nodes/s"] = benchmark::Counter(static_cast<double>(nodes),
                                                 benchmark::Counter::kIsRate);
}
BENCHMARK(BM_EnumerateGPrefix)->Arg(100000)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace chromplane

BENCHMARK_MAIN();
