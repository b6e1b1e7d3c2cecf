#include <benchmark/benchmark.h>

#include "gqn/sampler.hpp"
#include "gqn/scaling.hpp"
#include "gqn/workload.hpp"

namespace {

void BM_SamplePath(benchmark::State& state) {
  const auto vf = gqn::VarianceFunction::power(0.75);
  const double n = double(state.range(0));
  std::uint64_t rep = 0;
  for (auto _ : state) {
    const auto p = gqn::sample_path(vf, 0.0, n, 1.0,
                                    gqn::SeedSpec{1, rep++, 0});
    benchmark::DoNotOptimize(p.values.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SamplePath)->Arg(1 << 10)->Arg(1 << 14)->Arg(1 << 18);

void BM_ReflectTruncated(benchmark::State& state) {
  const auto vf = gqn::VarianceFunction::power(0.5);
  const double n = double(state.range(0));
  const auto p = gqn::sample_path(vf, -n, 1.0, 1.0, gqn::SeedSpec{2, 0, 0});
  for (auto _ : state) {
    const auto x = gqn::reflect_truncated(p, 1.0, 1.0);
    benchmark::DoNotOptimize(x.values.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ReflectTruncated)->Arg(1 << 12)->Arg(1 << 16)->Arg(1 << 20);

void BM_SolveDelta(benchmark::State& state) {
  const auto vf = gqn::VarianceFunction::power_sum({0.6, 1.4});
  double x = 1e-3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(gqn::solve_delta(vf, x));
    x = x * 1.37;
    if (x > 1e3) x = 1e-3;
  }
}
BENCHMARK(BM_SolveDelta);

void BM_ComputeQScaled(benchmark::State& state) {
  const auto vf = gqn::VarianceFunction::power(0.5);
  const auto spec = gqn::NetworkSpec::single_node({1.0, 1.0}, gqn::Regime::light);
  std::uint64_t rep = 0;
  for (auto _ : state) {
    const auto ws = gqn::compute_Q_scaled(spec, vf, 100.0, 0.5, 0.01, 10.0,
                                          gqn::SeedSpec{3, rep++, 0});
    benchmark::DoNotOptimize(ws.q.data());
  }
}
BENCHMARK(BM_ComputeQScaled);

}  // namespace

BENCHMARK_MAIN();
