#include <benchmark/benchmark.h>

#include "lyz/dynamics.hpp"
#include "lyz/measure.hpp"
#include "lyz/partition.hpp"
#include "lyz/spectra.hpp"
#include "lyz/zeros.hpp"

using namespace lyz;

static void BM_LiftOrbit(benchmark::State& state) {
  const ModelParams p(2, 0.3, 1.1);
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(lift_orbit(n, p, 0.2));
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_LiftOrbit)->Arg(1 << 10)->Arg(1 << 16);

static void BM_EnumerateZeros(benchmark::State& state) {
  const auto tree = TreeSpec::rooted(static_cast<int>(state.range(0)), 2);
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_zeros(tree, 0.3, {1e-12, 1}));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(tree.vertex_count()));
}
BENCHMARK(BM_EnumerateZeros)->Arg(8)->Arg(12)->Arg(14)->Unit(benchmark::kMillisecond);

static void BM_CdfQuery(benchmark::State& state) {
  const EmpiricalMeasure em(TreeSpec::rooted(static_cast<int>(state.range(0)), 2), 0.2);
  double phi = -3.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(em.cdf(phi));
    phi = phi > 3.0 ? -3.0 : phi + 0.001;
  }
}
BENCHMARK(BM_CdfQuery)->Arg(16)->Arg(30);

static void BM_Birkhoff(benchmark::State& state) {
  BirkhoffOptions o;
  o.length = static_cast<std::uint64_t>(state.range(0));
  o.seeds = 4;
  o.workers = 1;
  const ModelParams p(2, 0.2, 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(lyapunov_acim_birkhoff(p, o));
  state.SetItemsProcessed(state.iterations() * state.range(0) * 4);
}
BENCHMARK(BM_Birkhoff)->Arg(100000)->Unit(benchmark::kMillisecond);

static void BM_Mme(benchmark::State& state) {
  const ModelParams p(2, 0.2, 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(lyapunov_mme(p, static_cast<int>(state.range(0)), 1));
}
BENCHMARK(BM_Mme)->Arg(10)->Arg(14)->Unit(benchmark::kMillisecond);

static void BM_PartitionExact(benchmark::State& state) {
  const auto tree = TreeSpec::rooted(static_cast<int>(state.range(0)), 2);
  for (auto _ : state) benchmark::DoNotOptimize(partition_poly_recursive(tree, mpq_class(1, 5)));
}
BENCHMARK(BM_PartitionExact)->Arg(4)->Arg(7)->Unit(benchmark::kMillisecond);

static void BM_PartitionRoots(benchmark::State& state) {
  const auto poly = partition_poly_recursive(TreeSpec::rooted(static_cast<int>(state.range(0)), 2), mpq_class(1, 5));
  for (auto _ : state) benchmark::DoNotOptimize(poly_roots_on_circle(poly));
}
BENCHMARK(BM_PartitionRoots)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
