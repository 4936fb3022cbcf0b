#include <benchmark/benchmark.h>

#include "glidar/fusion.hpp"
#include "glidar/rng.hpp"

namespace {

glidar::RgbImage random_rgb(int side, uint64_t seed) {
    glidar::RgbImage rgb(side, side);
    glidar::Rng rng(seed);
    for (auto& v : rgb.data()) v = uint8_t(rng.uniform_below(256));
    return rgb;
}

void BM_ColorDifferences(benchmark::State& state) {
    const int side = int(state.range(0));
    const auto rgb = random_rgb(side, 3);
    for (auto _ : state) {
        auto delta = glidar::compute_color_differences(rgb, 15);
        benchmark::DoNotOptimize(delta);
    }
    state.SetItemsProcessed(state.iterations() * side * side * 225);
}
BENCHMARK(BM_ColorDifferences)->Arg(64)->Arg(128);

void BM_FuseIterations(benchmark::State& state) {
    const int side = int(state.range(0));
    glidar::Rng rng(5);

    glidar::RgbImage rgb(side, side);
    for (int r = 0; r < side; ++r)
        for (int c = 0; c < side; ++c) {
            const uint8_t v = c < side / 2 ? 80 : 200;
            rgb.set(r, c, v, v, v);
        }

    glidar::FloatCube cube(side, side, 31);
    glidar::Raster<float> init_d(side, side, 0.0f);
    glidar::Raster<float> init_r(side, side, 0.0f);
    glidar::Raster<uint8_t> observed(side, side, 0);
    for (int r = 0; r < side; ++r)
        for (int c = 0; c < side; ++c) {
            const double d = c < side / 2 ? 10.0 : 14.0;
            for (int k = 0; k < 31; ++k)
                cube.at(k, r, c) = float(glidar::erf_model(k, d, 120.0, 1.5, 0.0));
            init_d.at(r, c) = float(d);
            init_r.at(r, c) = 120.0f;
            observed.at(r, c) = rng.uniform() < 0.5 ? 1 : 0;
        }

    const auto delta = glidar::compute_color_differences(rgb, 15);
    const auto wr = glidar::compute_intensity_weights(delta, 10.0);
    const auto wd = glidar::compute_depth_weights(wr, 0.5);
    glidar::Raster<uint8_t> valid(side, side, 1);

    glidar::FusionConfig cfg;
    cfg.max_iters = 10;
    for (auto _ : state) {
        auto result = glidar::fuse(cube, observed, wd, wr, init_d, init_r, valid, cfg);
        benchmark::DoNotOptimize(result);
    }
    state.SetItemsProcessed(state.iterations() * 10 * side * side);
}
BENCHMARK(BM_FuseIterations)->Arg(64);

}  // namespace
