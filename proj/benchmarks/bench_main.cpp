#include <benchmark/benchmark.h>

#include "driftgraph/graph.hpp"
#include "driftgraph/kernels.hpp"
#include "driftgraph/rng.hpp"

using namespace driftgraph;

namespace {

kernels::KernelParams bench_kernel(kernels::Variant v) {
  kernels::KernelParams kp;
  kp.variant = v;
  kp.gamma = 0.8;
  kp.delta = 1.5;
  kp.dim = 1;
  return kp;
}

void BM_PairUniform(benchmark::State& state) {
  const EdgeOracle orc = make_edge_oracle(1, bench_kernel(kernels::Variant::Generic));
  std::uint64_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(orc.pair_uniform_bits(i & 1023, (i >> 10) & 1023, i & 7));
    ++i;
  }
}
BENCHMARK(BM_PairUniform);

void BM_ConnectionProb(benchmark::State& state) {
  const auto variant = static_cast<kernels::Variant>(state.range(0));
  const kernels::KernelParams kp = bench_kernel(variant);
  rng::Stream s(7);
  double r = 1.0, u = 0.3, v = 0.6;
  for (auto _ : state) {
    benchmark::DoNotOptimize(kernels::connection_prob(r, u, v, kp));
    r = 1.0 + 30.0 * rng::to_unit_open(s());
  }
}
BENCHMARK(BM_ConnectionProb)->Arg(0)->Arg(1)->Arg(2);

void BM_TailPairScan(benchmark::State& state) {
  const auto n_target = static_cast<double>(state.range(0));
  const PointCloud cloud = sample_ppp(Domain::torus(1, n_target), 1.0, false, 99);
  const EdgeOracle orc = make_edge_oracle(99, bench_kernel(kernels::Variant::SoftBoolean));
  std::int64_t epoch = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(collect_tail_pairs(orc, cloud, epoch++, 16.0));
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<std::int64_t>(cloud.size()) *
                          static_cast<std::int64_t>(cloud.size() - 1) / 2);
}
BENCHMARK(BM_TailPairScan)->Arg(2048)->Arg(8192)->Unit(benchmark::kMillisecond);

void BM_ComponentsFast(benchmark::State& state) {
  const PointCloud cloud = sample_ppp(Domain::torus(1, 2048.0), 1.0, false, 5);
  const EdgeOracle orc = make_edge_oracle(5, bench_kernel(kernels::Variant::SoftBoolean));
  Evolver ev(cloud);
  const Snapshot snap = ev.at(0.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(components_fast(orc, snap, 16.0));
  }
}
BENCHMARK(BM_ComponentsFast)->Unit(benchmark::kMillisecond);

void BM_ComponentsExact(benchmark::State& state) {
  const PointCloud cloud = sample_ppp(Domain::torus(1, 2048.0), 1.0, false, 5);
  const EdgeOracle orc = make_edge_oracle(5, bench_kernel(kernels::Variant::SoftBoolean));
  Evolver ev(cloud);
  const Snapshot snap = ev.at(0.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(components_exact(orc, snap, 4096));
  }
}
BENCHMARK(BM_ComponentsExact)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
