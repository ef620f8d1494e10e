#include <benchmark/benchmark.h>

#include <bird/geometry.hpp>
#include <bird/phd_filter.hpp>
#include <bird/rng.hpp>
#include <bird/sim.hpp>

#include <random>

using namespace bird;

namespace {

void BM_PhdPredictUpdate(benchmark::State& state) {
    Rng rng{1};
    std::uniform_real_distribution<double> u(0.0, 1000.0);
    GaussianMixture gm;
    for (int i = 0; i < 30; ++i) gm.components.push_back({0.2, Vec4(u(rng), u(rng), 0, 0), 100.0 * Mat4::Identity()});
    const auto prior = from_intensity(gm);
    std::vector<Vec2> z;
    for (int i = 0; i < 16; ++i) z.emplace_back(u(rng), u(rng));
    SensorModel sensor;
    sensor.fov = Region::rect(0, 1000, 0, 1000);
    sensor.clutter_region = sensor.fov;
    const auto motion = MotionModel::constant_velocity(1.0, 5.0);
    const auto birth = adaptive_birth(z);
    for (auto _ : state) {
        auto pred = phd_predict(prior, motion, {}, birth);
        benchmark::DoNotOptimize(phd_update(pred, z, sensor));
    }
}
BENCHMARK(BM_PhdPredictUpdate);

void BM_GaussianMassCorrelated(benchmark::State& state) {
    Rng rng{2};
    Mat2 p;
    p << 100.0, 40.0, 40.0, 80.0;
    const auto region = region_difference(Region::rect(0, 1000, 0, 1000), Region::rect(400, 600, -50, 1050));
    for (auto _ : state) benchmark::DoNotOptimize(gaussian_mass(Vec2(395, 500), p, region, 1000, rng));
}
BENCHMARK(BM_GaussianMassCorrelated);

void BM_GaussianMassMonteCarlo(benchmark::State& state) {
    Rng rng{3};
    const auto region = region_intersect(Region::disc(0, 0, 20), Region::rect(-5, 30, -30, 30));
    for (auto _ : state)
        benchmark::DoNotOptimize(gaussian_mass(Vec2(3, 1), 64.0 * Mat2::Identity(), region,
                                               static_cast<int>(state.range(0)), rng));
}
BENCHMARK(BM_GaussianMassMonteCarlo)->Arg(1000)->Arg(10000);

void BM_TrialTwoAgent(benchmark::State& state) {
    const auto cfg = two_agent_scenario();
    const auto mode = static_cast<Mode>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(run_trial(cfg, mode, Form::III, 0));
}
BENCHMARK(BM_TrialTwoAgent)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);

} // namespace
