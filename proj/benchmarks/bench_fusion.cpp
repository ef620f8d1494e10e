#include <benchmark/benchmark.h>

#include <bird/fusion.hpp>
#include <bird/network.hpp>
#include <bird/rng.hpp>

#include <random>

using namespace bird;

namespace {

PoissonPosterior random_posterior(int n, const Region& fov, Rng& rng) {
    const auto box = fov.bounding_box().value();
    std::uniform_real_distribution<double> ux(box.xmin, box.xmax), uy(box.ymin, box.ymax);
    GaussianMixture gm;
    for (int i = 0; i < n; ++i) gm.components.push_back({1.0, Vec4(ux(rng), uy(rng), 0, 0), 100.0 * Mat4::Identity()});
    return make_posterior(static_cast<double>(n), gm, fov, rng);
}

void BM_GciFuseCommon(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    Rng rng{1};
    const auto fov = Region::rect(0, 1000, 0, 1000);
    const auto a = random_posterior(n, fov, rng);
    const auto b = random_posterior(n, fov, rng);
    for (auto _ : state) benchmark::DoNotOptimize(gci_fuse_common(a, b, {}, fov, rng));
    state.SetComplexityN(n * n);
}
BENCHMARK(BM_GciFuseCommon)->RangeMultiplier(2)->Range(2, 32)->Complexity();

void BM_BirdFusePair(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    Rng rng{2};
    const auto fa = Region::rect(0, 1100, 0, 1000);
    const auto fb = Region::rect(900, 2000, 0, 1000);
    const LocalPosterior a{random_posterior(n, fa, rng), fa};
    const LocalPosterior b{random_posterior(n, fb, rng), fb};
    for (auto _ : state) benchmark::DoNotOptimize(bird_fuse_pair(a, b, {}, rng));
}
BENCHMARK(BM_BirdFusePair)->RangeMultiplier(2)->Range(2, 32);

void BM_BirdFusePairDisc(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    Rng rng{3};
    const auto fa = Region::disc(500, 500, 600);
    const auto fb = Region::disc(1300, 500, 600);
    const LocalPosterior a{random_posterior(n, fa, rng), fa};
    const LocalPosterior b{random_posterior(n, fb, rng), fb};
    for (auto _ : state) benchmark::DoNotOptimize(bird_fuse_pair(a, b, {}, rng));
}
BENCHMARK(BM_BirdFusePairDisc)->RangeMultiplier(2)->Range(2, 16);

void BM_ConsensusRound(benchmark::State& state) {
    Rng rng{4};
    const auto g = NetworkGraph::ring(5, true);
    std::vector<LocalPosterior> states;
    for (int i = 0; i < 5; ++i) {
        const auto fov = Region::rect(400.0 * i, 400.0 * i + 600.0, 0, 1000);
        states.push_back({random_posterior(8, fov, rng), fov});
    }
    for (auto _ : state) benchmark::DoNotOptimize(consensus_round(states, g, {}, 7));
}
BENCHMARK(BM_ConsensusRound);

} // namespace
