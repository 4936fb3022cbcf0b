#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace glidar {

/// Row-major 2D grid of values. (0,0) is the top-left pixel; `row` runs
/// down the image, `col` runs across.
template <typename T>
class Raster {
public:
    Raster() = default;
    Raster(int width, int height, T fill = T{})
        : width_(width), height_(height), data_(size_t(width) * height, fill) {
        if (width <= 0 || height <= 0)
            throw std::invalid_argument("Raster: dimensions must be positive");
    }

    int width() const { return width_; }
    int height() const { return height_; }
    size_t size() const { return data_.size(); }
    bool empty() const { return data_.empty(); }

    T& at(int row, int col) { return data_[size_t(row) * width_ + col]; }
    const T& at(int row, int col) const { return data_[size_t(row) * width_ + col]; }

    T& operator[](size_t i) { return data_[i]; }
    const T& operator[](size_t i) const { return data_[i]; }

    bool in_bounds(int row, int col) const {
        return row >= 0 && row < height_ && col >= 0 && col < width_;
    }

    std::vector<T>& data() { return data_; }
    const std::vector<T>& data() const { return data_; }

    bool same_dims(int w, int h) const { return width_ == w && height_ == h; }

    template <typename U>
    bool same_dims(const Raster<U>& other) const {
        return width_ == other.width() && height_ == other.height();
    }

    bool operator==(const Raster& other) const {
        return width_ == other.width_ && height_ == other.height_ && data_ == other.data_;
    }

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<T> data_;
};

/// 8-bit RGB image, interleaved r,g,b per pixel.
class RgbImage {
public:
    RgbImage() = default;
    RgbImage(int width, int height, uint8_t fill = 0)
        : width_(width), height_(height), data_(size_t(width) * height * 3, fill) {
        if (width <= 0 || height <= 0)
            throw std::invalid_argument("RgbImage: dimensions must be positive");
    }

    int width() const { return width_; }
    int height() const { return height_; }

    uint8_t& at(int row, int col, int channel) {
        return data_[(size_t(row) * width_ + col) * 3 + channel];
    }
    const uint8_t& at(int row, int col, int channel) const {
        return data_[(size_t(row) * width_ + col) * 3 + channel];
    }

    void set(int row, int col, uint8_t r, uint8_t g, uint8_t b) {
        uint8_t* p = &data_[(size_t(row) * width_ + col) * 3];
        p[0] = r;
        p[1] = g;
        p[2] = b;
    }

    std::vector<uint8_t>& data() { return data_; }
    const std::vector<uint8_t>& data() const { return data_; }

    bool operator==(const RgbImage& other) const {
        return width_ == other.width_ && height_ == other.height_ && data_ == other.data_;
    }

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<uint8_t> data_;
};

/// Boolean pixel mask stored as u8 (0 = false, 1 = true).
using Mask = Raster<uint8_t>;

inline size_t count_true(const Mask& m) {
    size_t n = 0;
    for (size_t i = 0; i < m.size(); ++i)
        if (m[i]) ++n;
    return n;
}

/// Rectangular pixel region, half-open in neither direction: rows
/// [row, row+height), cols [col, col+width).
struct Region {
    int row = 0;
    int col = 0;
    int width = 0;
    int height = 0;

    bool contains(int r, int c) const {
        return r >= row && r < row + height && c >= col && c < col + width;
    }
};

}  // namespace glidar
