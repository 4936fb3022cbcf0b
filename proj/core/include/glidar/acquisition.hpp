#pragma once

#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "glidar/cube.hpp"
#include "glidar/raster.hpp"
#include "glidar/scene.hpp"

namespace glidar {

/// Temporal gate sweep parameters. Depth samples are indexed by gate
/// position k; one gate step spans range_per_step_m of target range.
struct GateConfig {
    double gate_width_ns = 18.0;
    double gate_step_ns = 0.25;
    int num_gates = 51;
    double edge_width_h = 1.5;       // leading-edge width, gate-index units
    double range_per_step_m = 0.075; // 7.5 cm per 0.25 ns step; set to
                                     // c*dt/2 = 0.0375 for round-trip ranging
    double index_offset = 10.0;      // gate index of a target at base range

    void validate() const;
};

enum class SpotShape { Disc, Square };

/// Beam-scan geometry: a grid of illumination spots over the sensor.
struct ScanPattern {
    int grid_rows = 20;
    int grid_cols = 20;
    int spot_px = 50;  // footprint side (square) or diameter (disc)
    SpotShape spot_shape = SpotShape::Disc;
    int bitplanes_per_position = 256;
    int sensor_width = 320;
    int sensor_height = 240;

    int num_positions() const { return grid_rows * grid_cols; }

    /// Spot center of position index p (row-major over the grid).
    std::pair<int, int> spot_center(int p) const;

    /// True when the spot of position p covers sensor pixel (row, col).
    bool covers(int p, int row, int col) const;

    void validate() const;
};

/// Expected photon rates per bit-plane exposure.
struct NoiseConfig {
    double mean_signal_pp = 0.0;       // signal photons per bit plane at reflectivity 1
    double background_pp = 0.0;        // ambient photons per bit plane
    Raster<float> dcr_map;             // per-pixel dark count rate, Hz (empty = all zero)
    double exposure_s = 215e-6 / 256;  // per bit plane
    uint64_t rng_seed = 0;

    double dcr_hz(int row, int col) const {
        return dcr_map.empty() ? 0.0 : double(dcr_map.at(row, col));
    }

    void validate() const;
};

/// Target depth expressed in gate-index units.
double depth_to_gate_index(double depth_m, double base_range_m, const GateConfig& gate);
double gate_index_to_depth(double index, double base_range_m, const GateConfig& gate);

/// Forward model: expected photons per bit plane seen by pixel (row, col)
/// at gate index k. The profile over k is a rising erf edge of width
/// edge_width_h centered at the pixel's depth, scaled by reflectivity and
/// sitting on the background + dark-count floor.
double expected_rate(const Scene& scene, int row, int col, int k, const GateConfig& gate,
                     const NoiseConfig& noise, double base_range_m);

/// Per-bit-plane detection probability for a Poisson rate lambda.
inline double detection_probability(double lambda) { return -std::expm1(-lambda); }

/// Simulates the full acquisition: for every scan position in `positions`
/// (all positions when empty), every covered pixel accumulates
/// bitplanes_per_position binary draws per gate. Pixels never covered stay
/// zero. Each position consumes an independent RNG stream derived from
/// (rng_seed, position), so the cube is identical for any position order
/// and any subset is consistent with the full scan.
CountCube simulate(const Scene& scene, const GateConfig& gate, const ScanPattern& scan,
                   const NoiseConfig& noise, double base_range_m,
                   const std::vector<int>* positions = nullptr);

/// Noise-free expectation of simulate(): expected counts per pixel per gate.
FloatCube simulate_expected(const Scene& scene, const GateConfig& gate,
                            const ScanPattern& scan, const NoiseConfig& noise,
                            double base_range_m,
                            const std::vector<int>* positions = nullptr);

/// Number of scan positions whose spot covers each sensor pixel.
Raster<uint16_t> coverage_multiplicity(const ScanPattern& scan,
                                       const std::vector<int>* positions = nullptr);

}  // namespace glidar
