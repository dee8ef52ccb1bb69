// Parallel kernels against their serial references. Run with
// --benchmark_counters_tabular=true; OMP_NUM_THREADS controls the parallel side.

#include <benchmark/benchmark.h>

#include "curvlab/curvature.hpp"
#include "curvlab/generators.hpp"
#include "curvlab/kernel.hpp"
#include "curvlab/walk.hpp"

using namespace curvlab;

namespace {

const Graph& torus(int side) {
  static const Graph g32 = gen::torus({32, 32});
  static const Graph g64 = gen::torus({64, 64});
  return side == 32 ? g32 : g64;
}

template <bool Parallel>
void curvature(benchmark::State& st) {
  const auto& g = torus(static_cast<int>(st.range(0)));
  for (auto _ : st) {
    auto r = Parallel ? curvature_report(g) : serial::curvature_report(g);
    benchmark::DoNotOptimize(r.min_kappa);
  }
  st.counters["edges"] = static_cast<double>(g.adjacent_pairs().size());
}

template <bool Parallel>
void walk_grid(benchmark::State& st) {
  const auto& g = torus(static_cast<int>(st.range(0)));
  const int ns[] = {1, 2, 4, 8, 16, 32};
  for (auto _ : st) {
    auto s = Parallel ? walk_stats_grid(g, ns) : serial::walk_stats_grid(g, ns);
    benchmark::DoNotOptimize(s.back().mean_entropy);
  }
}

template <bool Parallel>
void dense_kernel(benchmark::State& st) {
  const auto& g = torus(32);
  const int n = static_cast<int>(st.range(0));
  for (auto _ : st) {
    auto k = Parallel ? kernel_matrix(g, n) : serial::kernel_matrix(g, n);
    benchmark::DoNotOptimize(k.data().data());
  }
}

template <bool Parallel>
void dense_multiply(benchmark::State& st) {
  const auto& g = torus(32);
  const auto a = kernel_matrix(g, 3);
  const auto b = kernel_matrix(g, 5);
  for (auto _ : st) {
    auto c = Parallel ? multiply(a, b) : serial::multiply(a, b);
    benchmark::DoNotOptimize(c.data().data());
  }
}

}  // namespace

BENCHMARK(curvature<true>)->Name("curvature_report/parallel")->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(curvature<false>)->Name("curvature_report/serial")->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(walk_grid<true>)->Name("walk_stats_grid/parallel")->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(walk_grid<false>)->Name("walk_stats_grid/serial")->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(dense_kernel<true>)->Name("kernel_matrix/parallel")->Arg(8)->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK(dense_kernel<false>)->Name("kernel_matrix/serial")->Arg(8)->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK(dense_multiply<true>)->Name("multiply/parallel")->Unit(benchmark::kMillisecond);
BENCHMARK(dense_multiply<false>)->Name("multiply/serial")->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
