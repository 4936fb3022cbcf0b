#include <benchmark/benchmark.h>

#include <vector>

#include "glidar/edge_fit.hpp"
#include "glidar/rng.hpp"

namespace {

std::vector<float> make_profile(int gates, double d, double r, double h, double noise_sd,
                                glidar::Rng& rng) {
    std::vector<float> y(static_cast<size_t>(gates));
    for (int k = 0; k < gates; ++k) {
        double v = glidar::erf_model(double(k), d, r, h, 0.0);
        if (noise_sd > 0.0) v = std::max(0.0, v + noise_sd * rng.normal());
        y[size_t(k)] = float(v);
    }
    return y;
}

void BM_FitPixelNoiseless(benchmark::State& state) {
    glidar::Rng rng(7);
    const auto y = make_profile(51, 17.3, 240.0, 1.5, 0.0, rng);
    glidar::FitConfig cfg;
    for (auto _ : state) {
        auto est = glidar::fit_pixel(y, cfg);
        benchmark::DoNotOptimize(est);
    }
}
BENCHMARK(BM_FitPixelNoiseless);

void BM_FitPixelNoisy(benchmark::State& state) {
    glidar::Rng rng(7);
    const auto y = make_profile(51, 17.3, 240.0, 1.5, 12.0, rng);
    glidar::FitConfig cfg;
    for (auto _ : state) {
        auto est = glidar::fit_pixel(y, cfg);
        benchmark::DoNotOptimize(est);
    }
}
BENCHMARK(BM_FitPixelNoisy);

void BM_FitCube(benchmark::State& state) {
    const int side = int(state.range(0));
    glidar::Rng rng(11);
    glidar::FloatCube cube(side, side, 51);
    for (int row = 0; row < side; ++row)
        for (int col = 0; col < side; ++col) {
            const double d = 10.0 + 5.0 * rng.uniform();
            for (int k = 0; k < 51; ++k)
                cube.at(k, row, col) =
                    float(std::max(0.0, glidar::erf_model(k, d, 200.0, 1.5, 0.0) +
                                            10.0 * rng.normal()));
        }
    glidar::FitConfig cfg;
    for (auto _ : state) {
        auto fit = glidar::fit_cube(cube, nullptr, cfg);
        benchmark::DoNotOptimize(fit);
    }
    state.SetItemsProcessed(state.iterations() * side * side);
}
BENCHMARK(BM_FitCube)->Arg(32)->Arg(64);

}  // namespace

BENCHMARK_MAIN();
