#include "glidar/preprocess.hpp"

#include <algorithm>

#include "glidar/error.hpp"

namespace glidar {

Raster<float> estimate_background(const CountCube& cube,
                                  const std::vector<int>& calib_gate_indices) {
    if (calib_gate_indices.empty())
        throw ConfigError("preprocess: calibration gate index set is empty");
    for (int k : calib_gate_indices)
        if (k < 0 || k >= cube.num_gates)
            throw ConfigError("preprocess: calibration gate index out of range");

    Raster<float> background(cube.width, cube.height, 0.0f);
    std::vector<float> samples(calib_gate_indices.size());
    for (int row = 0; row < cube.height; ++row) {
        for (int col = 0; col < cube.width; ++col) {
            for (size_t i = 0; i < calib_gate_indices.size(); ++i)
                samples[i] = float(cube.at(calib_gate_indices[i], row, col));
            std::sort(samples.begin(), samples.end());
            const size_t n = samples.size();
            const float median = (n % 2 == 1)
                                     ? samples[n / 2]
                                     : 0.5f * (samples[n / 2 - 1] + samples[n / 2]);
            background.at(row, col) = median;
        }
    }
    return background;
}

Raster<uint8_t> detect_hot_pixels(const Raster<float>& dcr_map_hz, double threshold_hz) {
    if (threshold_hz <= 0.0) throw ConfigError("preprocess: threshold_hz must be positive");
    Raster<uint8_t> mask(dcr_map_hz.width(), dcr_map_hz.height(), 0);
    for (size_t i = 0; i < dcr_map_hz.size(); ++i)
        if (double(dcr_map_hz[i]) > threshold_hz) mask[i] = 1;
    return mask;
}

Raster<float> estimate_dcr_proxy(const Raster<float>& background,
                                 const Raster<uint16_t>& coverage_multiplicity,
                                 int bitplanes_per_position, double exposure_s) {
    if (!background.same_dims(coverage_multiplicity))
        throw DataError("preprocess: background and coverage dims differ");
    if (bitplanes_per_position <= 0 || exposure_s <= 0.0)
        throw ConfigError("preprocess: exposure parameters must be positive");
    Raster<float> dcr(background.width(), background.height(), 0.0f);
    for (size_t i = 0; i < background.size(); ++i) {
        const double sweeps = double(coverage_multiplicity[i]) * bitplanes_per_position;
        if (sweeps > 0.0) dcr[i] = float(double(background[i]) / (sweeps * exposure_s));
    }
    return dcr;
}

FloatCube subtract_background(const CountCube& cube, const Raster<float>& background,
                              const Raster<uint8_t>& hot) {
    if (!background.same_dims(cube.width, cube.height))
        throw DataError("preprocess: background dims do not match the cube");
    if (!hot.same_dims(cube.width, cube.height))
        throw DataError("preprocess: hot mask dims do not match the cube");

    FloatCube cleaned(cube.width, cube.height, cube.num_gates);
    const size_t plane = size_t(cube.width) * cube.height;
    for (int k = 0; k < cube.num_gates; ++k) {
        for (size_t i = 0; i < plane; ++i) {
            if (hot[i]) continue;  // stays zero, excluded downstream
            const float v = float(cube.counts[size_t(k) * plane + i]) - background[i];
            cleaned.values[size_t(k) * plane + i] = v > 0.0f ? v : 0.0f;
        }
    }
    return cleaned;
}

namespace {

void check_crop(int w, int h, const Region& crop) {
    if (crop.width <= 0 || crop.height <= 0 || crop.row < 0 || crop.col < 0 ||
        crop.row + crop.height > h || crop.col + crop.width > w)
        throw ConfigError("crop region exceeds source dimensions");
}

}  // namespace

FloatCube crop_cube(const FloatCube& cube, const Region& crop) {
    check_crop(cube.width, cube.height, crop);
    FloatCube out(crop.width, crop.height, cube.num_gates);
    for (int k = 0; k < cube.num_gates; ++k)
        for (int r = 0; r < crop.height; ++r)
            for (int c = 0; c < crop.width; ++c)
                out.at(k, r, c) = cube.at(k, crop.row + r, crop.col + c);
    return out;
}

CountCube crop_cube(const CountCube& cube, const Region& crop) {
    check_crop(cube.width, cube.height, crop);
    CountCube out(crop.width, crop.height, cube.num_gates);
    for (int k = 0; k < cube.num_gates; ++k)
        for (int r = 0; r < crop.height; ++r)
            for (int c = 0; c < crop.width; ++c)
                out.at(k, r, c) = cube.at(k, crop.row + r, crop.col + c);
    return out;
}

RgbImage crop_rgb(const RgbImage& src, const Region& crop) {
    check_crop(src.width(), src.height(), crop);
    RgbImage out(crop.width, crop.height);
    for (int r = 0; r < crop.height; ++r)
        for (int c = 0; c < crop.width; ++c)
            for (int ch = 0; ch < 3; ++ch)
                out.at(r, c, ch) = src.at(crop.row + r, crop.col + c, ch);
    return out;
}

}  // namespace glidar
