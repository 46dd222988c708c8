#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "steinkit/estimators.hpp"
#include "steinkit/geometry/sampling.hpp"
#include "steinkit/geometry/tessellation.hpp"
#include "steinkit/models/kruns.hpp"
#include "steinkit/models/occupancy.hpp"
#include "steinkit/replicate.hpp"
#include "steinkit/rng.hpp"

using namespace steinkit;

static void BM_Tessellation(benchmark::State& state) {
    const geometry::WindowConfig w{static_cast<double>(state.range(0)), 6.0};
    Rng rng(1);
    for (auto _ : state) {
        const auto pts = geometry::sample_poisson(w, 1.0, rng);
        const auto t = geometry::build_tessellation(pts, w.region_half_side());
        benchmark::DoNotOptimize(geometry::total_edge_statistic(t, w));
    }
}
BENCHMARK(BM_Tessellation)->Arg(64)->Arg(256)->Arg(1024)->Unit(benchmark::kMicrosecond);

static void BM_OccupancyDraw(benchmark::State& state) {
    models::OccupancyConfig c;
    c.m = c.n = static_cast<std::size_t>(state.range(0));
    c.phi = {models::Functional::parse("empty")};
    const models::OccupancyModel m(c);
    Rng rng(2);
    for (auto _ : state) benchmark::DoNotOptimize(m.draw(rng));
}
BENCHMARK(BM_OccupancyDraw)->Arg(32)->Arg(128)->Arg(512);

static void BM_KRunsDraw(benchmark::State& state) {
    const models::KRunsModel m(static_cast<std::size_t>(state.range(0)), 2, 0.5);
    Rng rng(3);
    for (auto _ : state) benchmark::DoNotOptimize(m.draw(rng));
}
BENCHMARK(BM_KRunsDraw)->Arg(64)->Arg(4096);

static void BM_Ginibre(benchmark::State& state) {
    Rng rng(4);
    for (auto _ : state) benchmark::DoNotOptimize(geometry::sample_ginibre(static_cast<std::size_t>(state.range(0)), rng));
}
BENCHMARK(BM_Ginibre)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

static void BM_EmpiricalKolmogorov(benchmark::State& state) {
    std::vector<double> w(static_cast<std::size_t>(state.range(0)));
    Rng rng(5);
    std::normal_distribution<double> n01;
    for (auto& x : w) x = n01(rng);
    for (auto _ : state) benchmark::DoNotOptimize(empirical_kolmogorov(w));
}
BENCHMARK(BM_EmpiricalKolmogorov)->Arg(100000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
