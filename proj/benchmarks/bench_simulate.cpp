#include <benchmark/benchmark.h>

#include "glidar/acquisition.hpp"
#include "glidar/config.hpp"

namespace {

void BM_SimulateSmall(benchmark::State& state) {
    glidar::RunConfig cfg = glidar::small_config();
    const auto board = glidar::build_panel_board_scene(cfg.scene, cfg.scan.sensor_width,
                                                       cfg.scan.sensor_height);
    const auto noise = cfg.make_noise_config();
    for (auto _ : state) {
        auto cube = glidar::simulate(board.scene, cfg.gate, cfg.scan, noise, cfg.base_range_m);
        benchmark::DoNotOptimize(cube);
    }
}
BENCHMARK(BM_SimulateSmall);

void BM_SimulateExpectedReference(benchmark::State& state) {
    glidar::RunConfig cfg = glidar::reference_config();
    const auto board = glidar::build_panel_board_scene(cfg.scene, cfg.scan.sensor_width,
                                                       cfg.scan.sensor_height);
    const auto noise = cfg.make_noise_config();
    for (auto _ : state) {
        auto cube =
            glidar::simulate_expected(board.scene, cfg.gate, cfg.scan, noise, cfg.base_range_m);
        benchmark::DoNotOptimize(cube);
    }
}
BENCHMARK(BM_SimulateExpectedReference);

}  // namespace
