// Microbenchmarks for the hot paths: Cuculescu recursion, full decomposition,
// kernel application, and the pseudo-localization residual.
#include <benchmark/benchmark.h>

#include <czlab/cuculescu.hpp>
#include <czlab/czdecomp.hpp>
#include <czlab/dyadic.hpp>
#include <czlab/io.hpp>
#include <czlab/pseudoloc.hpp>
#include <czlab/singint.hpp>
#include <czlab/specfun.hpp>

namespace {

using namespace czlab;

GridFunction bench_fixture(int K, int m) {
  TorusGrid g{1, K};
  return make_fixture(FixtureKind::kRandomPsd, g, m, 0, 42u);
}

double bench_lambda(const GridFunction& f) {
  return 2.0 * op_norm_mat(cond_expectation(f, 0).cell(0));
}

void BM_CuculescuRecursion(benchmark::State& state) {
  const int K = static_cast<int>(state.range(0));
  const int m = static_cast<int>(state.range(1));
  const GridFunction f = bench_fixture(K, m);
  const double lambda = bench_lambda(f);
  for (auto _ : state) {
    CuculescuData cuc = cuculescu(f, lambda);
    benchmark::DoNotOptimize(cuc.q.back());
  }
  state.SetComplexityN(std::int64_t{1} << K);
}

void BM_FullDecomposition(benchmark::State& state) {
  const int K = static_cast<int>(state.range(0));
  const int m = static_cast<int>(state.range(1));
  const GridFunction f = bench_fixture(K, m);
  const double lambda = bench_lambda(f);
  for (auto _ : state) {
    CZParts parts = decompose(f, lambda);
    benchmark::DoNotOptimize(parts.g_off);
  }
}

void BM_KernelApply(benchmark::State& state) {
  const int K = static_cast<int>(state.range(0));
  TorusGrid g{1, K};
  const KernelOperator T = KernelOperator::hilbert_cotangent(g);
  const GridFunction f = make_fixture(FixtureKind::kHaarAtom, g, 1, K - 3, 7u);
  for (auto _ : state) {
    GridFunction tf = apply_operator(T, f);
    benchmark::DoNotOptimize(tf.cell(0));
  }
  state.SetComplexityN(std::int64_t{1} << K);
}

void BM_L2Residual(benchmark::State& state) {
  const int K = static_cast<int>(state.range(0));
  TorusGrid g{1, K};
  const KernelOperator T = KernelOperator::hilbert_cotangent(g);
  const GridFunction f = make_fixture(FixtureKind::kHaarAtom, g, 1, K - 3, 7u);
  for (auto _ : state) {
    double r = l2_residual(T, f, 2);
    benchmark::DoNotOptimize(r);
  }
}

void BM_ZetaProjection(benchmark::State& state) {
  const int K = static_cast<int>(state.range(0));
  const int m = static_cast<int>(state.range(1));
  const GridFunction f = bench_fixture(K, m);
  const CuculescuData cuc = cuculescu(f, bench_lambda(f));
  for (auto _ : state) {
    ProjectionField z = zeta(cuc);
    benchmark::DoNotOptimize(z.per_cube);
  }
}

BENCHMARK(BM_CuculescuRecursion)->Args({6, 2})->Args({8, 2})->Args({10, 2})->Args({8, 4});
BENCHMARK(BM_FullDecomposition)->Args({6, 2})->Args({8, 2})->Args({8, 4});
BENCHMARK(BM_KernelApply)->Arg(8)->Arg(10)->Arg(12);
BENCHMARK(BM_L2Residual)->Arg(10)->Arg(12);
BENCHMARK(BM_ZetaProjection)->Args({6, 2})->Args({8, 2});

}  // namespace

BENCHMARK_MAIN();
