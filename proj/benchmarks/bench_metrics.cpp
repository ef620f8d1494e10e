#include <benchmark/benchmark.h>

#include <bird/metrics.hpp>
#include <bird/rng.hpp>

#include <random>

using namespace bird;

namespace {

void BM_Ospa(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    Rng rng{1};
    std::uniform_real_distribution<double> u(0.0, 2000.0);
    std::vector<Vec2> x, y;
    for (int i = 0; i < n; ++i) x.emplace_back(u(rng), u(rng));
    for (int i = 0; i < n + 2; ++i) y.emplace_back(u(rng), u(rng));
    for (auto _ : state) benchmark::DoNotOptimize(ospa(x, y));
    state.SetComplexityN(n);
}
BENCHMARK(BM_Ospa)->RangeMultiplier(2)->Range(4, 128)->Complexity(benchmark::oNCubed);

} // namespace
