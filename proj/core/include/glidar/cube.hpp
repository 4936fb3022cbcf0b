#pragma once

#include <cstdint>
#include <vector>

#include "glidar/raster.hpp"

namespace glidar {

/// Photon-count cube y[gate][row][col]. Counts accumulate over every scan
/// position whose spot covers the pixel, so a value can exceed one
/// position's bit-plane budget but stays well inside u16.
struct CountCube {
    int width = 0;
    int height = 0;
    int num_gates = 0;
    std::vector<uint16_t> counts;  // [gate][row][col]

    CountCube() = default;
    CountCube(int w, int h, int k)
        : width(w), height(h), num_gates(k), counts(size_t(w) * h * k, 0) {}

    uint16_t& at(int gate, int row, int col) {
        return counts[(size_t(gate) * height + row) * width + col];
    }
    uint16_t at(int gate, int row, int col) const {
        return counts[(size_t(gate) * height + row) * width + col];
    }

    uint16_t max_count() const {
        uint16_t m = 0;
        for (uint16_t v : counts)
            if (v > m) m = v;
        return m;
    }

    bool operator==(const CountCube& o) const {
        return width == o.width && height == o.height && num_gates == o.num_gates &&
               counts == o.counts;
    }
};

/// Real-valued cube, used for noiseless expectations and the
/// background-subtracted (cleaned) data.
struct FloatCube {
    int width = 0;
    int height = 0;
    int num_gates = 0;
    std::vector<float> values;  // [gate][row][col]

    FloatCube() = default;
    FloatCube(int w, int h, int k)
        : width(w), height(h), num_gates(k), values(size_t(w) * h * k, 0.0f) {}

    float& at(int gate, int row, int col) {
        return values[(size_t(gate) * height + row) * width + col];
    }
    float at(int gate, int row, int col) const {
        return values[(size_t(gate) * height + row) * width + col];
    }

    bool operator==(const FloatCube& o) const {
        return width == o.width && height == o.height && num_gates == o.num_gates &&
               values == o.values;
    }
};

inline FloatCube to_float_cube(const CountCube& cube) {
    FloatCube out(cube.width, cube.height, cube.num_gates);
    for (size_t i = 0; i < cube.counts.size(); ++i) out.values[i] = float(cube.counts[i]);
    return out;
}

}  // namespace glidar
