// Microbenchmarks for the dispatched kernels and the samplers built on them.
// Compare lanes with: LONGMEM_SIMD=scalar ./longmem_bench vs the default.

#include <benchmark/benchmark.h>

#include <vector>

#include "longmem/estimate.hpp"
#include "longmem/fgn.hpp"
#include "longmem/hermite.hpp"
#include "longmem/kernels.hpp"
#include "longmem/rng.hpp"

namespace {

using namespace longmem;

void bm_dot(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto a = gaussian_stream({1, 1}, n);
  const auto b = gaussian_stream({1, 2}, n);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::dot(a.data(), b.data(), n));
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(bm_dot)->Arg(256)->Arg(4096)->Arg(65536);

void bm_dot_scalar(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto a = gaussian_stream({1, 1}, n);
  const auto b = gaussian_stream({1, 2}, n);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::scalar::dot(a.data(), b.data(), n));
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(bm_dot_scalar)->Arg(256)->Arg(4096)->Arg(65536);

void bm_hermite_apply(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const int order = static_cast<int>(state.range(1));
  const auto x = gaussian_stream({2, 1}, n);
  std::vector<double> out(n);
  for (auto _ : state) {
    kernels::hermite_apply(order, x.data(), out.data(), n);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(bm_hermite_apply)->Args({65536, 2})->Args({65536, 4});

void bm_hermite_apply_scalar(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const int order = static_cast<int>(state.range(1));
  const auto x = gaussian_stream({2, 1}, n);
  std::vector<double> out(n);
  for (auto _ : state) {
    kernels::scalar::hermite_apply(order, x.data(), out.data(), n);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(bm_hermite_apply_scalar)->Args({65536, 2})->Args({65536, 4});

void bm_fgn_fast(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  FgnFastSampler sampler(HurstIndex(0.75), n);
  std::uint64_t stream = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sampler.sample({3, stream++}));
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(bm_fgn_fast)->Arg(1024)->Arg(16384)->Arg(262144);

void bm_fgn_exact(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::uint64_t stream = 0;
  for (auto _ : state)
    benchmark::DoNotOptimize(generate_fgn_exact(HurstIndex(0.75), n, {4, stream++}));
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(bm_fgn_exact)->Arg(256)->Arg(1024);

void bm_rs_hurst(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const StationarySeries series = generate_fgn_fast(HurstIndex(0.7), n, {5, 0});
  const std::vector<std::size_t> windows = dyadic_windows(16, n / 8);
  for (auto _ : state) benchmark::DoNotOptimize(rs_hurst(series, windows));
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(bm_rs_hurst)->Arg(16384);

}  // namespace

BENCHMARK_MAIN();
