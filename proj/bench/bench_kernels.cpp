// Serial reference loops against the OpenMP kernels. Thread count follows
// BERGMAN_LAB_THREADS (or OMP_NUM_THREADS).

#include <benchmark/benchmark.h>

#include "bergman/basis_space.hpp"
#include "bergman/parallel.hpp"
#include "bergman/quadrature.hpp"
#include "bergman/reference.hpp"
#include "bergman/toeplitz.hpp"
#include "bergman/weights.hpp"

namespace {

using namespace bergman;

void BM_GramSerial(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  const DiskQuadrature q = build_rule(2 * n + 8, 4 * n + 8);
  const Weight w = Weight::standard_alpha(0.5);
  for (auto _ : st) benchmark::DoNotOptimize(reference::gram_matrix(TruncatedBasis(n), w, q));
}

void BM_GramParallel(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  const DiskQuadrature q = build_rule(2 * n + 8, 4 * n + 8);
  const Weight w = Weight::standard_alpha(0.5);
  for (auto _ : st) benchmark::DoNotOptimize(gram_matrix(TruncatedBasis(n), w, q).gram);
}

void BM_IntegrateSerial(benchmark::State& st) {
  const DiskQuadrature q = build_rule(static_cast<int>(st.range(0)), 2 * static_cast<int>(st.range(0)));
  auto f = [](Complex z) { return std::exp(-std::norm(z)) * std::cos(3.0 * std::arg(z)); };
  for (auto _ : st) benchmark::DoNotOptimize(reference::integrate(f, q));
}

void BM_IntegrateParallel(benchmark::State& st) {
  const DiskQuadrature q = build_rule(static_cast<int>(st.range(0)), 2 * static_cast<int>(st.range(0)));
  auto f = [](Complex z) { return std::exp(-std::norm(z)) * std::cos(3.0 * std::arg(z)); };
  for (auto _ : st) benchmark::DoNotOptimize(sum_rule(f, q));
}

const SymbolMeasure& sweep_symbol() {
  static const SymbolMeasure sm = SymbolMeasure::symbol([](Complex z) { return std::norm(z); }, "|z|^2");
  return sm;
}

void BM_BerezinSerial(benchmark::State& st) {
  const DiskQuadrature q = build_rule(32, 64);
  const Weight w = Weight::standard_alpha(0.0);
  const auto grid = default_berezin_grid();
  for (auto _ : st) benchmark::DoNotOptimize(reference::berezin_grid(sweep_symbol(), grid, w, q));
}

void BM_BerezinParallel(benchmark::State& st) {
  const DiskQuadrature q = build_rule(32, 64);
  const Weight w = Weight::standard_alpha(0.0);
  const auto grid = default_berezin_grid();
  for (auto _ : st) benchmark::DoNotOptimize(berezin_grid(sweep_symbol(), grid, w, q));
}

}  // namespace

BENCHMARK(BM_GramSerial)->Arg(12)->Arg(24)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GramParallel)->Arg(12)->Arg(24)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_IntegrateSerial)->Arg(256)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_IntegrateParallel)->Arg(256)->Unit(benchmark::kMicrosecond)->UseRealTime();
BENCHMARK(BM_BerezinSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BerezinParallel)->Unit(benchmark::kMillisecond)->UseRealTime();

int main(int argc, char** argv) {
  bergman::parallel::apply_thread_cap_from_env();
  benchmark::Initialize(&argc, argv);
  benchmark::RunSpecifiedBenchmarks();
  benchmark::Shutdown();
  return 0;
}
