#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "glidar/acquisition.hpp"
#include "glidar/edge_fit.hpp"
#include "glidar/fusion.hpp"
#include "glidar/scene.hpp"

namespace glidar {

/// Everything needed for a reproducible end-to-end run. Field names carry
/// their unit; the text form uses the same dotted keys (see configs/).
struct RunConfig {
    uint64_t seed = 1;
    double base_range_m = 150.0;

    PanelBoardSpec scene;
    GateConfig gate;
    ScanPattern scan;

    // Noise rates; the per-pixel DCR map is generated from these and the seed.
    double mean_signal_pp = 0.19;
    double background_pp = 0.01;
    double exposure_s_per_bitplane = 215e-6 / 256;
    double dcr_base_hz = 1000.0;
    double dcr_hot_fraction = 0.02;
    double dcr_hot_hz = 100000.0;

    std::vector<int> calib_gates{0, 1, 2};
    double hot_threshold_hz = 10000.0;

    FitConfig fit;
    FusionConfig fusion;

    Region crop{6, 46, 228, 228};
    std::vector<double> subsample_fractions{0.25, 0.10, 0.05};
    double correction_constant_m = 0.0;

    void validate() const;

    /// Deterministic per-pixel dark count map: dcr_base_hz everywhere with a
    /// seeded dcr_hot_fraction of pixels at dcr_hot_hz.
    Raster<float> make_dcr_map() const;

    NoiseConfig make_noise_config() const;
};

/// The defaults above, i.e. the reference acquisition this project is
/// calibrated on (also shipped as configs/reference.cfg).
RunConfig reference_config();

/// A small, fast variant for demos and pipeline tests.
RunConfig small_config();

RunConfig parse_run_config(const std::string& path);
RunConfig parse_run_config_text(const std::string& text, const std::string& origin = "<string>");

/// Serializes a config back to its text form (parse round-trips).
std::string config_to_text(const RunConfig& config);

}  // namespace glidar
