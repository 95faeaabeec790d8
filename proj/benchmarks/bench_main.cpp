#include "hypercut/mixing.hpp"
#include "hypercut/modular.hpp"
#include "hypercut/quotient.hpp"
#include "hypercut/radial.hpp"
#include "hypercut/spherical.hpp"
#include "hypercut/torus.hpp"
#include "hypercut/walk.hpp"

#include <benchmark/benchmark.h>

#include <cmath>

using namespace hypercut;

static void BM_SphericalPrincipal(benchmark::State& state) {
    const double s = double(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(spectral::spherical_principal(s, 4.0));
}
BENCHMARK(BM_SphericalPrincipal)->Arg(0)->Arg(5)->Arg(40);

static void BM_SphericalComplementary(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(spectral::spherical_complementary(3.0, 6.0));
}
BENCHMARK(BM_SphericalComplementary);

static void BM_RadialMixture(benchmark::State& state) {
    const int k = int(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(spectral::radial_mixture(k, 1.0).total_mass());
}
BENCHMARK(BM_RadialMixture)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

static void BM_StepDiscrete(benchmark::State& state) {
    Rng rng = block_rng(1, walk::tag_walk, 0);
    geom::PointH z = geom::PointH::i();
    for (auto _ : state) {
        z = walk::step_discrete(geom::PointH::i(), 1.0, rng);
        benchmark::DoNotOptimize(z);
    }
}
BENCHMARK(BM_StepDiscrete);

static void BM_QuotientStep(benchmark::State& state) {
    modular::QuotientPoint p(geom::PointH::i(), modular::CosetModQ::identity(5));
    double theta = 0.1;
    for (auto _ : state) {
        p = mixing::quotient_step(p, 1.0, theta);
        theta = std::fmod(theta + 0.7071, M_PI);
        benchmark::DoNotOptimize(p);
    }
}
BENCHMARK(BM_QuotientStep);

static void BM_EnumerateBall(benchmark::State& state) {
    const double B = double(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(modular::enumerate_ball(B).size());
}
BENCHMARK(BM_EnumerateBall)->Arg(6)->Arg(10)->Unit(benchmark::kMillisecond);

static void BM_DistanceOracle(benchmark::State& state) {
    modular::CongruenceCover cover(5);
    modular::QuotientPoint x0(geom::PointH::i(), modular::CosetModQ::identity(5));
    modular::DistanceOracle oracle(x0, 6.0, 10.0);
    Rng rng = block_rng(2, walk::tag_distances, 0);
    for (auto _ : state) benchmark::DoNotOptimize(oracle(modular::sample_uniform_quotient(cover, 10.0, rng)));
}
BENCHMARK(BM_DistanceOracle);

static void BM_TorusL1(benchmark::State& state) {
    const double t = double(state.range(0)) / 10;
    for (auto _ : state) benchmark::DoNotOptimize(torus::torus_l1({1.0, t}).l1);
}
BENCHMARK(BM_TorusL1)->Arg(1)->Arg(10)->Arg(50);
BENCHMARK_MAIN();
