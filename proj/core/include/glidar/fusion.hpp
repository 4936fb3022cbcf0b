#pragma once

#include <cstdint>
#include <vector>

#include "glidar/acquisition.hpp"
#include "glidar/cube.hpp"
#include "glidar/edge_fit.hpp"
#include "glidar/raster.hpp"
#include "glidar/weight_field.hpp"

namespace glidar {

enum class ColorTransform { Rgb, Yuv, Ycbcr };

struct FusionConfig {
    double tau_d = 4.0;    // depth regularization strength
    double tau_r = 0.25;   // intensity regularization strength
    double sigma_c = 10.0; // color similarity scale, RGB units
    double sigma_s = 0.5;  // spatial scale, in units of normalized field distance
    int field_side = 15;
    double h = 1.5;        // edge width of the likelihood model
    EdgeFunction edge_function = EdgeFunction::Erf;
    ColorTransform color_transform = ColorTransform::Rgb;
    int max_iters = 120;
    double rel_tol = 1e-6;
    double init_step_d = 0.02;  // initial gradient step sizes; backtracking
    double init_step_r = 2.0;   // adjusts both, so these only set the scale

    void validate() const;
};

/// Bilinear resample to target dimensions; channels handled independently,
/// corner pixels map onto corner pixels.
RgbImage rescale_rgb(const RgbImage& src, int target_width, int target_height);

/// Mean absolute per-channel difference between each pixel and every pixel
/// of its field: delta[n][m] = (1/3) sum_c |I_c(n) - I_c(n + off(m))|.
/// Out-of-bounds offsets are marked with -1. The optional transform maps
/// RGB to another color space before differencing.
WeightField compute_color_differences(const RgbImage& rgb, int field_side,
                                      ColorTransform transform = ColorTransform::Rgb);

/// Intensity weights w^r[n][m] = exp(-delta / sigma_c) for in-bounds
/// non-center offsets; 0 elsewhere.
WeightField compute_intensity_weights(const WeightField& delta, double sigma_c);

/// Depth weights: each intensity weight further scaled by
/// exp(-dist(m) / (dist_max * sigma_s)), the normalized Euclidean offset
/// distance within the field.
WeightField compute_depth_weights(const WeightField& intensity_weights, double sigma_s);

/// Poisson negative log-likelihood of the edge model against the cleaned
/// cube, summed over observed pixels:
/// sum_k lambda - y * ln(lambda + eps), lambda = edge_model(k, d, r, h, 0).
double negative_log_likelihood(const Raster<float>& depth_index,
                               const Raster<float>& intensity, const FloatCube& cleaned,
                               const Raster<uint8_t>& observed, double h,
                               EdgeFunction fn = EdgeFunction::Erf);

/// Fills invalid pixels with the value of the nearest valid pixel
/// (multi-source BFS; deterministic).
Raster<float> nearest_valid_fill(const Raster<float>& values, const Raster<uint8_t>& valid);

/// Fills invalid pixels from the valid pixel with the cheapest color-geodesic
/// path, where stepping between 4-neighbors costs their color dissimilarity
/// (taken from the weight field's adjacent offsets) plus a small distance
/// term. Fill values therefore flow around color edges instead of across
/// them. Used to initialize fuse().
Raster<float> guided_fill(const Raster<float>& values, const Raster<uint8_t>& valid,
                          const WeightField& intensity_weights);

struct FusionResult {
    Raster<float> depth_index;
    Raster<float> intensity;
    std::vector<double> objective_trace;  // objective value per iteration, C_0 first
    int iterations = 0;
    bool converged = false;
};

/// Minimizes
///   C(d, r) = NLL(d, r) + i_{>=0}(d, r)
///           + tau_d * sum_{n,m} w^d[n][m] |d_n - d_{n+m}|
///           + tau_r * sum_{n,m} w^r[n][m] |r_n - r_{n+m}|
/// by alternating a backtracked gradient step on the likelihood with
/// weighted-l1 proximal updates per raster. Steps that would raise the
/// objective are rejected and retried smaller, so the objective trace is
/// non-increasing by construction.
FusionResult fuse(const FloatCube& cleaned, const Raster<uint8_t>& observed,
                  const WeightField& depth_weights, const WeightField& intensity_weights,
                  const Raster<float>& init_depth_index, const Raster<float>& init_intensity,
                  const Raster<uint8_t>& init_valid, const FusionConfig& config);

/// Seeded uniform subsample of scan positions plus the pixels they
/// illuminate within the crop. For a fixed seed the selected sets are
/// nested across fractions.
struct SubsampleResult {
    std::vector<int> positions;   // selected scan position indices, ascending
    Raster<uint8_t> observed;     // crop-sized observation mask
    double pixel_coverage = 0.0;  // fraction of crop pixels observed
};
SubsampleResult subsample_scan_positions(const ScanPattern& scan, double fraction,
                                         uint64_t seed, const Region& crop);

}  // namespace glidar
