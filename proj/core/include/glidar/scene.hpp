#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "glidar/raster.hpp"

namespace glidar {

/// Ground-truth scene: per-pixel range, return efficiency and a
/// co-registered RGB image, all on the same pixel grid.
struct Scene {
    Raster<float> depth_m;       // true range, finite and >= 0
    Raster<float> reflectivity;  // [0, 1]
    RgbImage rgb;

    int width() const { return depth_m.width(); }
    int height() const { return depth_m.height(); }

    bool operator==(const Scene& other) const {
        return depth_m == other.depth_m && reflectivity == other.reflectivity &&
               rgb == other.rgb;
    }
};

/// Throws DataError if any scene invariant is violated.
void validate_scene(const Scene& scene);

/// Elliptical foreground object standing in front of the board.
struct EllipseBlob {
    double center_row = 0.0;
    double center_col = 0.0;
    double radius_row = 1.0;  // semi-axis, px
    double radius_col = 1.0;
    double depth_m = 0.0;
    double reflectivity = 0.5;
    std::array<uint8_t, 3> color{128, 128, 128};
};

/// Four-panel calibration board in front of a flat backdrop, with optional
/// foreground blobs. Panel indices run clockwise from top-left:
/// 0 = TL, 1 = TR, 2 = BR, 3 = BL.
struct PanelBoardSpec {
    double base_range_m = 150.0;
    std::array<double, 4> panel_offsets_m{0.0, 0.10, 0.20, 0.30};
    std::array<std::array<uint8_t, 3>, 4> panel_colors{{
        {206, 186, 150},  // TL
        {166, 124, 82},   // TR
        {120, 86, 56},    // BR
        {70, 52, 36},     // BL
    }};
    std::array<double, 4> panel_reflectivity{0.75, 0.62, 0.50, 0.40};

    int board_px = 200;    // side length; must be even
    int board_row = -1;    // top-left corner; -1 centers the board
    int board_col = -1;

    // Backdrop plane behind the board. Kept inside the gate window so every
    // pixel has a fittable return.
    double backdrop_offset_m = 0.60;
    std::array<uint8_t, 3> backdrop_color{96, 98, 104};
    double backdrop_reflectivity = 0.35;

    std::vector<EllipseBlob> blobs;
};

/// Region labels for the generated board scene.
inline constexpr uint8_t kRegionBackdrop = 0;
inline constexpr uint8_t kRegionPanelTL = 1;
inline constexpr uint8_t kRegionPanelTR = 2;
inline constexpr uint8_t kRegionPanelBR = 3;
inline constexpr uint8_t kRegionPanelBL = 4;
inline constexpr uint8_t kRegionBlobBase = 10;  // blob i -> 10 + i

struct BoardScene {
    Scene scene;
    Raster<uint8_t> region;  // per-pixel label, see kRegion* constants
};

/// Rasterizes the board spec into a scene of the given dimensions.
/// Foreground blobs occlude the board wherever they are nearer.
/// Throws ConfigError when the board does not fit or the spec is invalid.
BoardScene build_panel_board_scene(const PanelBoardSpec& spec, int width, int height);

/// Pixel regions of the four panels (clockwise from top-left).
std::array<Region, 4> panel_regions(const PanelBoardSpec& spec, int width, int height);

}  // namespace glidar
