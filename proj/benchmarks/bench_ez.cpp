#include <benchmark/benchmark.h>

#include "effho/ez.hpp"

using namespace effho;

namespace {

LESpace circle_space() {
    SimplexKey vv{{}, "v", 0};
    return finite_space("S1", {{0, {"v"}}, {1, {"e"}}}, {{"e", {vv, vv}}});
}

}  // namespace

static void BM_EZHomotopy(benchmark::State& state) {
    int n = static_cast<int>(state.range(0));
    LESpace x = standard_simplex(n);
    for (auto _ : state) {
        // fresh reduction each round so the per-generator caches start cold
        Reduction r = ez_reduction(x, x);
        Int acc = 0;
        for (const GenKey& g : r.top.basis(n)) acc += r.eta.apply_gen(g).size();
        benchmark::DoNotOptimize(acc);
    }
}
BENCHMARK(BM_EZHomotopy)->Arg(2)->Arg(3);

static void BM_TorusHomologyViaEZ(benchmark::State& state) {
    LESpace s1 = circle_space();
    for (auto _ : state) {
        Reduction r = ez_reduction(s1, s1);
        auto h1 = homology(r.bottom, 1);
        benchmark::DoNotOptimize(h1.group.rank());
    }
}
BENCHMARK(BM_TorusHomologyViaEZ);
