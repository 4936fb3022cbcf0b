#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "glidar/acquisition.hpp"
#include "glidar/edge_fit.hpp"
#include "glidar/error.hpp"
#include "glidar/rng.hpp"

using namespace glidar;

namespace {

Scene flat_scene(int width, int height, double depth_m, double reflectivity) {
    Scene scene;
    scene.depth_m = Raster<float>(width, height, float(depth_m));
    scene.reflectivity = Raster<float>(width, height, float(reflectivity));
    scene.rgb = RgbImage(width, height, 128);
    return scene;
}

/// One spot covering the whole (small) sensor keeps count statistics simple.
ScanPattern whole_sensor_scan(int width, int height, int bitplanes) {
    ScanPattern scan;
    scan.grid_rows = 1;
    scan.grid_cols = 1;
    scan.spot_px = 4 * std::max(width, height);  // covers everything
    scan.spot_shape = SpotShape::Square;
    scan.bitplanes_per_position = bitplanes;
    scan.sensor_width = width;
    scan.sensor_height = height;
    return scan;
}

}  // namespace

TEST_CASE("expected_rate at the edge center is half the signal") {
    const Scene scene = flat_scene(4, 4, 150.0, 1.0);
    GateConfig gate;  // index_offset 10: depth 150 -> gate index 10
    NoiseConfig noise;
    noise.mean_signal_pp = 0.2;
    const double lambda = expected_rate(scene, 1, 1, 10, gate, noise, 150.0);
    CHECK(lambda == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("expected_rate saturates to the full signal far past the edge") {
    const Scene scene = flat_scene(4, 4, 150.0, 1.0);
    GateConfig gate;
    NoiseConfig noise;
    noise.mean_signal_pp = 0.2;
    const double lambda = expected_rate(scene, 0, 0, 50, gate, noise, 150.0);
    CHECK(lambda == doctest::Approx(0.2).epsilon(1e-9));
}

TEST_CASE("expected_rate is monotone non-decreasing in k without background") {
    const Scene scene = flat_scene(3, 3, 150.3, 0.7);
    GateConfig gate;
    NoiseConfig noise;
    noise.mean_signal_pp = 0.3;
    double prev = -1.0;
    for (int k = 0; k < gate.num_gates; ++k) {
        const double lambda = expected_rate(scene, 1, 1, k, gate, noise, 150.0);
        CHECK(lambda >= prev);
        prev = lambda;
    }
}

TEST_CASE("h -> 0 degenerates to a step function away from the edge") {
    // Indicator oracle for |k - d| >= 5h: below the edge ~0, above ~r.
    const double d = 20.3;
    const double r = 0.25;
    for (double h : {0.5, 0.1, 0.01}) {
        Scene scene = flat_scene(2, 2, 150.0 + (d - 10.0) * 0.075, 1.0);
        GateConfig gate;
        gate.edge_width_h = h;
        NoiseConfig noise;
        noise.mean_signal_pp = r;
        for (int k = 0; k < gate.num_gates; ++k) {
            if (std::abs(k - d) < 5.0 * h) continue;
            const double lambda = expected_rate(scene, 0, 0, k, gate, noise, 150.0);
            const double oracle = k < d ? 0.0 : r;
            CHECK(lambda == doctest::Approx(oracle).epsilon(1e-9).scale(r));
        }
    }
    // h = 0 exactly: step semantics built into the model.
    CHECK(erf_model(9.999, 10.0, 4.0, 0.0, 1.0) == 1.0);
    CHECK(erf_model(10.0, 10.0, 4.0, 0.0, 1.0) == 3.0);
    CHECK(erf_model(10.001, 10.0, 4.0, 0.0, 1.0) == 5.0);
}

TEST_CASE("depth/gate-index conversion") {
    GateConfig gate;
    SUBCASE("7.5 cm maps to exactly one gate step") {
        const double i0 = depth_to_gate_index(150.0, 150.0, gate);
        const double i1 = depth_to_gate_index(150.075, 150.0, gate);
        CHECK(i1 - i0 == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("zero depth change maps to zero index change") {
        CHECK(depth_to_gate_index(150.0, 150.0, gate) ==
              depth_to_gate_index(150.0, 150.0, gate));
    }
    SUBCASE("round trip is exact to float rounding") {
        for (double depth : {149.25, 150.0, 150.3, 151.875}) {
            const double index = depth_to_gate_index(depth, 150.0, gate);
            CHECK(std::abs(gate_index_to_depth(index, 150.0, gate) - depth) < 1e-9);
        }
    }
    SUBCASE("physics-correct conversion is selectable") {
        gate.range_per_step_m = 0.0375;  // c * 0.25 ns / 2
        const double i1 = depth_to_gate_index(150.0375, 150.0, gate);
        const double i0 = depth_to_gate_index(150.0, 150.0, gate);
        CHECK(i1 - i0 == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("non-positive step is an error") {
        gate.range_per_step_m = 0.0;
        CHECK_THROWS_AS(depth_to_gate_index(150.0, 150.0, gate), ConfigError);
    }
}

TEST_CASE("zero rates produce an all-zero cube") {
    const Scene scene = flat_scene(16, 16, 150.0, 0.0);
    const ScanPattern scan = whole_sensor_scan(16, 16, 64);
    GateConfig gate;
    gate.num_gates = 8;
    NoiseConfig noise;  // all rates zero
    const CountCube cube = simulate(scene, gate, scan, noise, 150.0);
    for (uint16_t v : cube.counts) REQUIRE(v == 0);
}

TEST_CASE("constant rate counts match binomial moments") {
    // lambda = 0.1 everywhere: per pixel per gate Binomial(256, 1 - e^-0.1).
    const int side = 104;  // >= 10^4 pixels
    Scene scene = flat_scene(side, side, 160.0, 0.0);  // edge far above window
    GateConfig gate;
    gate.num_gates = 2;
    NoiseConfig noise;
    noise.background_pp = 0.1;
    noise.rng_seed = 99;
    const ScanPattern scan = whole_sensor_scan(side, side, 256);
    const CountCube cube = simulate(scene, gate, scan, noise, 150.0);

    const double p = 1.0 - std::exp(-0.1);
    const double mean = 256.0 * p;                 // ~24.37
    const double var = 256.0 * p * (1.0 - p);      // per draw
    const size_t n = cube.counts.size();
    double sum = 0.0, sum_sq = 0.0;
    for (uint16_t v : cube.counts) {
        sum += v;
        sum_sq += double(v) * v;
    }
    const double emp_mean = sum / double(n);
    const double emp_var = sum_sq / double(n) - emp_mean * emp_mean;
    const double mean_se = std::sqrt(var / double(n));
    CHECK(std::abs(emp_mean - mean) < 3.0 * mean_se);
    CHECK(emp_var == doctest::Approx(var).epsilon(0.05));
}

TEST_CASE("noiseless expectation traces a scaled erf edge recoverable by the fitter") {
    const double d_true = 25.0;
    Scene scene = flat_scene(8, 8, 150.0 + (d_true - 10.0) * 0.075, 0.9);
    GateConfig gate;
    gate.edge_width_h = 1.0;
    NoiseConfig noise;
    noise.mean_signal_pp = 0.25;
    const ScanPattern scan = whole_sensor_scan(8, 8, 256);
    const FloatCube cube = simulate_expected(scene, gate, scan, noise, 150.0);

    std::vector<float> profile(size_t(gate.num_gates));
    for (int k = 0; k < gate.num_gates; ++k) profile[size_t(k)] = cube.at(k, 4, 4);

    // Midpoint crossing sits at k = d +/- 0.5.
    const float plateau = profile.back();
    int crossing = -1;
    for (int k = 0; k < gate.num_gates; ++k)
        if (profile[size_t(k)] >= 0.5f * plateau) {
            crossing = k;
            break;
        }
    CHECK(std::abs(double(crossing) - d_true) <= 0.5);

    FitConfig fit_cfg;
    fit_cfg.h = 1.0;
    const PixelEstimate est = fit_pixel(profile, fit_cfg);
    CHECK(est.valid);
    // The binary-pixel response 1 - e^-lambda compresses the plateau, which
    // biases the erf fit by O(lambda^2); at this rate it stays below 0.1 step.
    CHECK(std::abs(est.d - d_true) < 0.1);

    // At low rates the response is linear and the fit recovers d tightly.
    NoiseConfig faint = noise;
    faint.mean_signal_pp = 0.02;
    const FloatCube faint_cube = simulate_expected(scene, gate, scan, faint, 150.0);
    for (int k = 0; k < gate.num_gates; ++k) profile[size_t(k)] = faint_cube.at(k, 4, 4);
    const PixelEstimate faint_est = fit_pixel(profile, fit_cfg);
    CHECK(faint_est.valid);
    CHECK(std::abs(faint_est.d - d_true) < 5e-3);
}

TEST_CASE("same seed and config give identical cubes, different seeds differ") {
    const Scene scene = flat_scene(32, 32, 150.2, 0.8);
    ScanPattern scan;
    scan.grid_rows = 2;
    scan.grid_cols = 2;
    scan.spot_px = 24;
    scan.bitplanes_per_position = 128;
    scan.sensor_width = 32;
    scan.sensor_height = 32;
    GateConfig gate;
    gate.num_gates = 12;
    NoiseConfig noise;
    noise.mean_signal_pp = 0.2;
    noise.background_pp = 0.02;
    noise.rng_seed = 1234;

    const CountCube a = simulate(scene, gate, scan, noise, 150.0);
    const CountCube b = simulate(scene, gate, scan, noise, 150.0);
    CHECK(a == b);

    noise.rng_seed = 1235;
    const CountCube c = simulate(scene, gate, scan, noise, 150.0);
    CHECK_FALSE(a == c);
}

TEST_CASE("subset simulation equals the matching slice of the full scan") {
    const Scene scene = flat_scene(48, 48, 150.1, 0.7);
    ScanPattern scan;
    scan.grid_rows = 3;
    scan.grid_cols = 3;
    scan.spot_px = 20;
    scan.bitplanes_per_position = 64;
    scan.sensor_width = 48;
    scan.sensor_height = 48;
    GateConfig gate;
    gate.num_gates = 6;
    NoiseConfig noise;
    noise.mean_signal_pp = 0.3;
    noise.rng_seed = 7;

    // Per-position RNG streams: full cube = sum of single-position cubes.
    const CountCube full = simulate(scene, gate, scan, noise, 150.0);
    CountCube accum(48, 48, gate.num_gates);
    for (int p = 0; p < scan.num_positions(); ++p) {
        std::vector<int> subset{p};
        const CountCube part = simulate(scene, gate, scan, noise, 150.0, &subset);
        for (size_t i = 0; i < accum.counts.size(); ++i)
            accum.counts[i] = uint16_t(accum.counts[i] + part.counts[i]);
    }
    CHECK(accum == full);
}

TEST_CASE("pixels outside every spot footprint stay zero") {
    const Scene scene = flat_scene(64, 64, 150.0, 1.0);
    ScanPattern scan;
    scan.grid_rows = 1;
    scan.grid_cols = 1;
    scan.spot_px = 16;  // centered disc, corners uncovered
    scan.sensor_width = 64;
    scan.sensor_height = 64;
    GateConfig gate;
    gate.num_gates = 4;
    NoiseConfig noise;
    noise.mean_signal_pp = 0.5;
    noise.background_pp = 0.5;
    noise.rng_seed = 5;
    const CountCube cube = simulate(scene, gate, scan, noise, 150.0);
    const auto mult = coverage_multiplicity(scan);
    size_t uncovered = 0;
    for (int r = 0; r < 64; ++r)
        for (int c = 0; c < 64; ++c)
            if (mult.at(r, c) == 0) {
                ++uncovered;
                for (int k = 0; k < gate.num_gates; ++k) REQUIRE(cube.at(k, r, c) == 0);
            }
    CHECK(uncovered > 0);
}

TEST_CASE("the reference pattern covers the whole crop") {
    ScanPattern scan;  // defaults: 20x20 grid, 50 px disc on 240x320
    const auto mult = coverage_multiplicity(scan);
    size_t uncovered = 0;
    for (int r = 6; r < 6 + 228; ++r)
        for (int c = 46; c < 46 + 228; ++c)
            if (mult.at(r, c) == 0) ++uncovered;
    CHECK(uncovered == 0);
}

TEST_CASE("counts never exceed bitplanes times coverage multiplicity") {
    const Scene scene = flat_scene(40, 40, 150.0, 1.0);
    ScanPattern scan;
    scan.grid_rows = 2;
    scan.grid_cols = 2;
    scan.spot_px = 30;
    scan.bitplanes_per_position = 32;
    scan.sensor_width = 40;
    scan.sensor_height = 40;
    GateConfig gate;
    gate.num_gates = 4;
    NoiseConfig noise;
    noise.mean_signal_pp = 50.0;  // saturating rate
    noise.rng_seed = 3;
    const CountCube cube = simulate(scene, gate, scan, noise, 150.0);
    const auto mult = coverage_multiplicity(scan);
    for (int r = 0; r < 40; ++r)
        for (int c = 0; c < 40; ++c)
            for (int k = 0; k < gate.num_gates; ++k)
                REQUIRE(cube.at(k, r, c) <= 32 * mult.at(r, c));
}

TEST_CASE("binomial sampler matches moments across the p range") {
    Rng rng(2024);
    for (double p : {0.001, 0.05, 0.3, 0.5, 0.7, 0.97}) {
        const int n = 256;
        const int draws = 20000;
        double sum = 0.0, sum_sq = 0.0;
        BinomialDist dist(n, p);
        for (int i = 0; i < draws; ++i) {
            const int v = dist.draw(rng);
            REQUIRE(v >= 0);
            REQUIRE(v <= n);
            sum += v;
            sum_sq += double(v) * v;
        }
        const double mean = sum / draws;
        const double var = sum_sq / draws - mean * mean;
        const double expect_mean = n * p;
        const double expect_var = n * p * (1.0 - p);
        CHECK(std::abs(mean - expect_mean) < 4.0 * std::sqrt(expect_var / draws));
        CHECK(var == doctest::Approx(expect_var).epsilon(0.08));
    }
}

TEST_CASE("scene/sensor dimension mismatch is rejected") {
    const Scene scene = flat_scene(16, 16, 150.0, 0.5);
    ScanPattern scan = whole_sensor_scan(32, 32, 16);
    GateConfig gate;
    NoiseConfig noise;
    CHECK_THROWS_AS(simulate(scene, gate, scan, noise, 150.0), ConfigError);
}
