#include <benchmark/benchmark.h>

#include "modlab/kernels.hpp"

using namespace modlab;

namespace {

void BM_EquivarianceSerial(benchmark::State& st) {
  auto f = equivariance_kernel(group_by_key("sl2r"), static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(serial_max_residual(200, 1, f));
}
void BM_EquivarianceParallel(benchmark::State& st) {
  auto f = equivariance_kernel(group_by_key("sl2r"), static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(parallel_max_residual(200, 1, f));
}
void BM_MultiplicativitySerial(benchmark::State& st) {
  auto f = multiplicativity_kernel(group_by_key(st.range(0) == 2 ? "sl2r" : "sl3r"));
  for (auto _ : st) benchmark::DoNotOptimize(serial_max_residual(200, 2, f));
}
void BM_MultiplicativityParallel(benchmark::State& st) {
  auto f = multiplicativity_kernel(group_by_key(st.range(0) == 2 ? "sl2r" : "sl3r"));
  for (auto _ : st) benchmark::DoNotOptimize(parallel_max_residual(200, 2, f));
}

}  // namespace

BENCHMARK(BM_EquivarianceSerial)->DenseRange(3, 6)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EquivarianceParallel)->DenseRange(3, 6)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MultiplicativitySerial)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MultiplicativityParallel)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
