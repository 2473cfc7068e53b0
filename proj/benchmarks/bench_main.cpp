#include <benchmark/benchmark.h>

#include "semiembed/jordan.hpp"
#include "semiembed/positive_embed.hpp"
#include "semiembed/real_embed.hpp"
#include "semiembed/verify.hpp"

using namespace semiembed;

namespace {

Matrix embeddable(Index n, std::uint64_t index) {
  Rng rng = trial_rng(99, 0, index);
  return to_complex(random_real_embeddable(n, rng));
}

void BM_Expm(benchmark::State& state) {
  const Matrix m = embeddable(state.range(0), 1);
  for (auto _ : state) benchmark::DoNotOptimize(expm(m));
}
BENCHMARK(BM_Expm)->DenseRange(2, 8, 2);

void BM_ExpmExtended(benchmark::State& state) {
  const Matrix m = embeddable(state.range(0), 1);
  for (auto _ : state) benchmark::DoNotOptimize(expm_extended(m));
}
BENCHMARK(BM_ExpmExtended)->DenseRange(2, 8, 2);

void BM_JordanDecompose(benchmark::State& state) {
  const Matrix m = embeddable(state.range(0), 2);
  const Tolerances tol;
  for (auto _ : state) benchmark::DoNotOptimize(jordan_decompose(m, tol));
}
BENCHMARK(BM_JordanDecompose)->DenseRange(2, 8, 2);

void BM_RealLogarithm(benchmark::State& state) {
  const Matrix m = embeddable(state.range(0), 3);
  const Tolerances tol;
  for (auto _ : state) benchmark::DoNotOptimize(real_logarithm(m, tol));
}
BENCHMARK(BM_RealLogarithm)->DenseRange(2, 8, 2);

void BM_MetzlerLogSearch(benchmark::State& state) {
  Rng rng = trial_rng(99, 1, 0);
  const Matrix t = expm(to_complex(random_metzler(state.range(0), rng)));
  const Tolerances tol;
  for (auto _ : state) benchmark::DoNotOptimize(metzler_log_search(t, static_cast<int>(state.range(1)), tol));
}
BENCHMARK(BM_MetzlerLogSearch)->ArgsProduct({{3, 5, 8}, {1, 2}});

}  // namespace

BENCHMARK_MAIN();
