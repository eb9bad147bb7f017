#include <benchmark/benchmark.h>

#include <random>

#include "delaycast/dynamics.hpp"
#include "delaycast/forecast.hpp"
#include "delaycast/infotheory.hpp"
#include "delaycast/neighbor_index.hpp"

using namespace delaycast;

namespace {

RowMatrix random_points(int n, int d, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    RowMatrix out(n, d);
    for (double& v : out.data()) v = dist(rng);
    return out;
}

const TimeSeries& lorenz96_trace() {
    static const TimeSeries ts = [] {
        SystemParams params;
        params.lorenz96_sites = 22;
        return generate_benchmark_trace(BenchmarkSystem::lorenz96,
                                        default_protocol(BenchmarkSystem::lorenz96, params), params);
    }();
    return ts;
}

} // namespace

static void BM_Digamma(benchmark::State& state) {
    double x = 1.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(digamma(x));
        x += 0.1;
        if (x > 1e6) x = 1.0;
    }
}
BENCHMARK(BM_Digamma);

static void BM_IndexBuild(benchmark::State& state) {
    const auto pts = random_points(static_cast<int>(state.range(0)), 3, 1);
    for (auto _ : state) {
        NeighborIndex index(pts);
        benchmark::DoNotOptimize(index.size());
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_IndexBuild)->RangeMultiplier(4)->Range(1 << 10, 1 << 16)->Complexity();

static void BM_IndexKnn(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const auto pts = random_points(n, 3, 2);
    const NeighborIndex index(pts);
    std::vector<Neighbor> out;
    int q = 0;
    for (auto _ : state) {
        index.knn(pts.row(q), 4, IdInterval::single(q), out);
        benchmark::DoNotOptimize(out.data());
        q = (q + 1) % n;
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_IndexKnn)->RangeMultiplier(4)->Range(1 << 10, 1 << 16)->Complexity();

static void BM_KsgMi(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    std::mt19937_64 rng(3);
    std::normal_distribution<double> g(0.0, 1.0);
    RowMatrix x(n, 1), y(n, 1);
    for (int i = 0; i < n; ++i) {
        const double z = g(rng);
        x(i, 0) = z;
        y(i, 0) = 0.6 * z + 0.8 * g(rng);
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(ksg_mi(x, y, 4).value);
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_KsgMi)->RangeMultiplier(4)->Range(1 << 10, 1 << 14)->Complexity();

static void BM_SpiLorenz96(benchmark::State& state) {
    const auto& ts = lorenz96_trace();
    SpiRequest req;
    req.params = {static_cast<int>(state.range(0)), 1, 1};
    req.k = 4;
    for (auto _ : state) {
        benchmark::DoNotOptimize(spi(ts, req).value);
    }
}
BENCHMARK(BM_SpiLorenz96)->Arg(2)->Arg(4)->Arg(8);

static void BM_RollingForecast(benchmark::State& state) {
    const auto& ts = lorenz96_trace();
    const int n = static_cast<int>(ts.length() * 0.9);
    for (auto _ : state) {
        const auto result = rolling_forecast(ts, {2, 1, 1}, n, ts.length() - n, {});
        benchmark::DoNotOptimize(result.mase);
    }
}
BENCHMARK(BM_RollingForecast);

BENCHMARK_MAIN();
