#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "glidar/raster.hpp"

namespace glidar {

/// Per-pixel non-local weights over a square field of offsets.
/// Offset index m enumerates the field row-major: for field_side s,
/// m = (dr + s/2) * s + (dc + s/2) with dr, dc in [-s/2, s/2].
/// The center offset (a pixel against itself) and offsets leaving the
/// image carry weight 0.
class WeightField {
public:
    WeightField() = default;
    WeightField(int width, int height, int field_side)
        : width_(width),
          height_(height),
          field_side_(field_side),
          weights_(size_t(width) * height * field_side * field_side, 0.0f) {}

    int width() const { return width_; }
    int height() const { return height_; }
    int field_side() const { return field_side_; }
    int offset_count() const { return field_side_ * field_side_; }
    int center_offset() const { return (field_side_ * field_side_) / 2; }

    /// Field offset (d_row, d_col) for offset index m.
    std::pair<int, int> offset(int m) const {
        const int half = field_side_ / 2;
        return {m / field_side_ - half, m % field_side_ - half};
    }

    float& at(int row, int col, int m) {
        return weights_[(size_t(row) * width_ + col) * offset_count() + m];
    }
    float at(int row, int col, int m) const {
        return weights_[(size_t(row) * width_ + col) * offset_count() + m];
    }

    /// Weights of one pixel, offset_count() consecutive values.
    const float* row_ptr(int row, int col) const {
        return &weights_[(size_t(row) * width_ + col) * offset_count()];
    }

    std::vector<float>& data() { return weights_; }
    const std::vector<float>& data() const { return weights_; }

    /// Index of the mirrored offset (-dr, -dc).
    int mirror(int m) const { return offset_count() - 1 - m; }

    /// Euclidean length of offset m in pixels.
    double offset_distance(int m) const {
        auto [dr, dc] = offset(m);
        return std::sqrt(double(dr) * dr + double(dc) * dc);
    }

private:
    int width_ = 0;
    int height_ = 0;
    int field_side_ = 0;
    std::vector<float> weights_;
};

}  // namespace glidar
