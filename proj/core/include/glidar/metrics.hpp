#pragma once

#include <array>
#include <string>

#include "glidar/raster.hpp"

namespace glidar {

struct MetricsReport {
    std::array<double, 4> patch_stddev_cm{};     // per panel, clockwise from TL
    std::array<double, 4> panel_mean_diff_cm{};  // adjacent pairs, clockwise from TL
    double rmse_cm = 0.0;
    double pixel_coverage = 0.0;
    double validity_fraction = 0.0;
    double runtime_seconds = 0.0;

    /// Structured-text form. Runtime is reported separately on the console
    /// so that written reports are byte-identical across reruns.
    std::string to_json() const;
    std::string to_csv_row() const;
    static std::string csv_header();
};

/// Sample standard deviation of valid depths in the patch, in cm.
/// Requires the patch inside the raster and at least two valid pixels.
double patch_stddev_cm(const Raster<float>& depth_m, const Raster<uint8_t>& valid,
                       const Region& patch);

/// Absolute differences of mean depth between adjacent panels, clockwise
/// pairs (TL,TR), (TR,BR), (BR,BL), (BL,TL), in cm.
std::array<double, 4> panel_mean_differences_cm(const Raster<float>& depth_m,
                                                const Raster<uint8_t>& valid,
                                                const std::array<Region, 4>& panels);

double depth_rmse_cm(const Raster<float>& estimate_m, const Raster<float>& truth_m,
                     const Raster<uint8_t>& valid);

double coverage_fraction(const Raster<uint8_t>& mask);

/// Mean depth over the pixels of `region_mask` that are also valid.
double region_mean_depth_m(const Raster<float>& depth_m, const Raster<uint8_t>& valid,
                           const Raster<uint8_t>& region_mask);

/// 25x25 patch centered in each panel (panels must be at least 45x45 so a
/// 10 px border is kept clear).
std::array<Region, 4> centered_patches(const std::array<Region, 4>& panels, int patch_side = 25);

struct RenderOptions {
    double min_depth_m = 0.0;  // color range; min >= max selects it from the data
    double max_depth_m = 0.0;
    const Raster<float>* intensity_overlay = nullptr;  // modulates brightness
    const RgbImage* rgb_overlay = nullptr;             // blended 50/50
};

/// Color-mapped depth image; invalid pixels render in a sentinel color.
void render_depth(const Raster<float>& depth_m, const Raster<uint8_t>& valid,
                  const std::string& path, const RenderOptions& options = {});

}  // namespace glidar
