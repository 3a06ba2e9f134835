#include <benchmark/benchmark.h>

#include "effho/matrix.hpp"

#include <random>

using namespace effho;

namespace {

IntMatrix random_matrix(std::mt19937_64& rng, size_t n, int spread) {
    std::uniform_int_distribution<int> d(-spread, spread);
    IntMatrix m(n, n);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) m.at(i, j) = d(rng);
    return m;
}

}  // namespace

static void BM_SmithNormalForm(benchmark::State& state) {
    std::mt19937_64 rng(7);
    size_t n = static_cast<size_t>(state.range(0));
    IntMatrix m = random_matrix(rng, n, 9);
    for (auto _ : state) {
        SmithResult r = smith_normal_form(m);
        benchmark::DoNotOptimize(r.rank);
    }
}
BENCHMARK(BM_SmithNormalForm)->Arg(8)->Arg(16)->Arg(32);

static void BM_KernelBasis(benchmark::State& state) {
    std::mt19937_64 rng(8);
    size_t n = static_cast<size_t>(state.range(0));
    IntMatrix m = random_matrix(rng, n, 5);
    for (auto _ : state) {
        IntMatrix k = kernel_basis(m);
        benchmark::DoNotOptimize(k.cols());
    }
}
BENCHMARK(BM_KernelBasis)->Arg(8)->Arg(16);

BENCHMARK_MAIN();
