#pragma once

#include <cstdint>
#include <span>

#include "glidar/cube.hpp"
#include "glidar/raster.hpp"

namespace glidar {

enum class EdgeFunction { Erf, Arctan };

/// Leading-edge response: b + (r/2) * (1 + erf((k - d) / h)).
/// h = 0 degenerates to a step at k = d (value b + r/2 exactly at the step).
double erf_model(double k, double d, double r, double h, double b);

/// Arctan variant normalized to the same asymptotes:
/// b + (r/2) * (1 + (2/pi) * atan((k - d) / h)).
double arctan_model(double k, double d, double r, double h, double b);

double edge_model(EdgeFunction fn, double k, double d, double r, double h, double b);

struct FitConfig {
    double h = 1.5;                 // fixed edge width, gate-index units
    int max_iters = 60;
    double convergence_tol = 1e-9;  // relative parameter change
    double min_amplitude = 1.0;     // fits below this r are marked invalid
    EdgeFunction edge_function = EdgeFunction::Erf;
    int min_plateau_samples = 3;    // samples beyond d + 2h required for validity

    void validate() const;
};

struct PixelEstimate {
    double d = 0.0;            // edge position, gate-index units
    double r = 0.0;            // intensity (plateau counts)
    double b = 0.0;            // background, pinned to 0 after preprocessing
    double residual_ss = 0.0;  // sum of squared residuals at the solution
    bool valid = false;
};

/// Nonlinear least-squares fit of (d, r) >= 0 to one gate profile, h fixed,
/// b pinned to zero. Damped Gauss-Newton from a half-plateau-crossing
/// initializer. Profiles with no discernible edge come back valid = false.
PixelEstimate fit_pixel(std::span<const float> profile, const FitConfig& config);

/// Per-pixel fit results over a cube cross-section. depth is in gate-index
/// units; conversion to meters is the acquisition module's job.
struct FitResult {
    Raster<float> depth_index;
    Raster<float> intensity;
    Raster<float> residual_ss;
    Raster<uint8_t> valid;

    size_t valid_count() const { return count_true(valid); }
};

/// Fits every pixel of the cleaned cube. Pixels set in `exclude` (hot or
/// unobserved) are skipped and marked invalid.
FitResult fit_cube(const FloatCube& cleaned, const Raster<uint8_t>* exclude,
                   const FitConfig& config);

/// Post-fit depth correction for gate-edge mismatch. The default zero
/// correction is the identity.
struct EdgeCorrection {
    double constant_m = 0.0;
    Raster<float> offset_map_m;  // optional per-pixel term, empty = none
};

/// Adds the correction to every valid pixel of a depth raster (meters).
void apply_edge_correction(Raster<float>& depth_m, const Raster<uint8_t>& valid,
                           const EdgeCorrection& correction);

/// Derives a constant correction from a fitted flat reference plane at a
/// known range: the offset that moves the mean fitted depth onto it.
EdgeCorrection calibrate_constant_correction(const Raster<float>& fitted_depth_m,
                                             const Raster<uint8_t>& valid,
                                             double known_range_m);

}  // namespace glidar
