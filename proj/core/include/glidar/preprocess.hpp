#pragma once

#include <cstdint>
#include <vector>

#include "glidar/cube.hpp"
#include "glidar/raster.hpp"

namespace glidar {

/// Per-pixel constant noise floor, in counts per gate sample. Estimated as
/// the median of counts over gate indices known to precede any return.
Raster<float> estimate_background(const CountCube& cube,
                                  const std::vector<int>& calib_gate_indices);

/// Pixels whose dark count rate exceeds threshold_hz (default 10 kHz).
Raster<uint8_t> detect_hot_pixels(const Raster<float>& dcr_map_hz,
                                  double threshold_hz = 10000.0);

/// DCR proxy from cube statistics: background counts divided by the
/// exposure accumulated into one gate sample of that pixel. The proxy also
/// absorbs ambient background, so it overestimates slightly.
Raster<float> estimate_dcr_proxy(const Raster<float>& background,
                                 const Raster<uint16_t>& coverage_multiplicity,
                                 int bitplanes_per_position, double exposure_s);

/// cleaned[n,k] = max(0, y[n,k] - background[n]); pixels set in `hot` are
/// zeroed and must be excluded downstream.
FloatCube subtract_background(const CountCube& cube, const Raster<float>& background,
                              const Raster<uint8_t>& hot);

/// Crop helpers used when the processed window is smaller than the sensor.
FloatCube crop_cube(const FloatCube& cube, const Region& crop);
CountCube crop_cube(const CountCube& cube, const Region& crop);
template <typename T>
Raster<T> crop_raster(const Raster<T>& src, const Region& crop) {
    Raster<T> out(crop.width, crop.height);
    for (int r = 0; r < crop.height; ++r)
        for (int c = 0; c < crop.width; ++c) out.at(r, c) = src.at(crop.row + r, crop.col + c);
    return out;
}
RgbImage crop_rgb(const RgbImage& src, const Region& crop);

}  // namespace glidar
