#include "glidar/scene.hpp"

#include <cmath>

#include "glidar/error.hpp"

namespace glidar {

void validate_scene(const Scene& scene) {
    if (!scene.depth_m.same_dims(scene.reflectivity) ||
        scene.depth_m.width() != scene.rgb.width() ||
        scene.depth_m.height() != scene.rgb.height())
        throw DataError("scene: depth, reflectivity and rgb dimensions differ");
    for (size_t i = 0; i < scene.depth_m.size(); ++i) {
        const float d = scene.depth_m[i];
        if (!std::isfinite(d) || d < 0.0f)
            throw DataError("scene: depth must be finite and non-negative");
        const float r = scene.reflectivity[i];
        if (!(r >= 0.0f && r <= 1.0f))
            throw DataError("scene: reflectivity outside [0, 1]");
    }
}

static void validate_spec(const PanelBoardSpec& spec, int width, int height) {
    if (width <= 0 || height <= 0)
        throw ConfigError("scene: raster dimensions must be positive");
    if (spec.board_px <= 0 || spec.board_px % 2 != 0)
        throw ConfigError("scene: board_px must be positive and even");
    if (spec.board_px > width || spec.board_px > height)
        throw ConfigError("scene: board does not fit inside the raster");
    for (double off : spec.panel_offsets_m)
        if (spec.base_range_m + off < 0.0)
            throw ConfigError("scene: panel depth must be non-negative");
    if (spec.base_range_m + spec.backdrop_offset_m < 0.0)
        throw ConfigError("scene: backdrop depth must be non-negative");
    for (double r : spec.panel_reflectivity)
        if (r < 0.0 || r > 1.0)
            throw ConfigError("scene: panel reflectivity outside [0, 1]");
    if (spec.backdrop_reflectivity < 0.0 || spec.backdrop_reflectivity > 1.0)
        throw ConfigError("scene: backdrop reflectivity outside [0, 1]");
    for (const auto& blob : spec.blobs) {
        if (blob.depth_m < 0.0) throw ConfigError("scene: blob depth must be non-negative");
        if (blob.reflectivity < 0.0 || blob.reflectivity > 1.0)
            throw ConfigError("scene: blob reflectivity outside [0, 1]");
        if (blob.radius_row <= 0.0 || blob.radius_col <= 0.0)
            throw ConfigError("scene: blob radii must be positive");
    }
}

static std::pair<int, int> board_origin(const PanelBoardSpec& spec, int width, int height) {
    int row = spec.board_row >= 0 ? spec.board_row : (height - spec.board_px) / 2;
    int col = spec.board_col >= 0 ? spec.board_col : (width - spec.board_px) / 2;
    if (row + spec.board_px > height || col + spec.board_px > width)
        throw ConfigError("scene: board placement exceeds the raster");
    return {row, col};
}

std::array<Region, 4> panel_regions(const PanelBoardSpec& spec, int width, int height) {
    auto [row, col] = board_origin(spec, width, height);
    const int half = spec.board_px / 2;
    return {{
        {row, col, half, half},                // TL
        {row, col + half, half, half},         // TR
        {row + half, col + half, half, half},  // BR
        {row + half, col, half, half},         // BL
    }};
}

BoardScene build_panel_board_scene(const PanelBoardSpec& spec, int width, int height) {
    validate_spec(spec, width, height);
    const auto panels = panel_regions(spec, width, height);

    BoardScene out;
    out.scene.depth_m = Raster<float>(width, height,
                                      float(spec.base_range_m + spec.backdrop_offset_m));
    out.scene.reflectivity = Raster<float>(width, height, float(spec.backdrop_reflectivity));
    out.scene.rgb = RgbImage(width, height);
    out.region = Raster<uint8_t>(width, height, kRegionBackdrop);

    for (int r = 0; r < height; ++r)
        for (int c = 0; c < width; ++c)
            out.scene.rgb.set(r, c, spec.backdrop_color[0], spec.backdrop_color[1],
                              spec.backdrop_color[2]);

    for (int q = 0; q < 4; ++q) {
        const Region& reg = panels[q];
        const float depth = float(spec.base_range_m + spec.panel_offsets_m[q]);
        for (int r = reg.row; r < reg.row + reg.height; ++r) {
            for (int c = reg.col; c < reg.col + reg.width; ++c) {
                out.scene.depth_m.at(r, c) = depth;
                out.scene.reflectivity.at(r, c) = float(spec.panel_reflectivity[q]);
                out.scene.rgb.set(r, c, spec.panel_colors[q][0], spec.panel_colors[q][1],
                                  spec.panel_colors[q][2]);
                out.region.at(r, c) = uint8_t(kRegionPanelTL + q);
            }
        }
    }

    // Blobs occlude whatever is behind them; nearer depth wins.
    for (size_t b = 0; b < spec.blobs.size(); ++b) {
        const EllipseBlob& blob = spec.blobs[b];
        const int r_lo = std::max(0, int(std::floor(blob.center_row - blob.radius_row)));
        const int r_hi = std::min(height - 1, int(std::ceil(blob.center_row + blob.radius_row)));
        const int c_lo = std::max(0, int(std::floor(blob.center_col - blob.radius_col)));
        const int c_hi = std::min(width - 1, int(std::ceil(blob.center_col + blob.radius_col)));
        for (int r = r_lo; r <= r_hi; ++r) {
            for (int c = c_lo; c <= c_hi; ++c) {
                const double dr = (r - blob.center_row) / blob.radius_row;
                const double dc = (c - blob.center_col) / blob.radius_col;
                if (dr * dr + dc * dc > 1.0) continue;
                if (float(blob.depth_m) >= out.scene.depth_m.at(r, c)) continue;
                out.scene.depth_m.at(r, c) = float(blob.depth_m);
                out.scene.reflectivity.at(r, c) = float(blob.reflectivity);
                out.scene.rgb.set(r, c, blob.color[0], blob.color[1], blob.color[2]);
                out.region.at(r, c) = uint8_t(kRegionBlobBase + b);
            }
        }
    }
    return out;
}

}  // namespace glidar
