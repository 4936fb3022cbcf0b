#include "glidar/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "glidar/error.hpp"
#include "glidar/png_io.hpp"

namespace glidar {

namespace {

void check_dims(const Raster<float>& a, const Raster<uint8_t>& b, const char* what) {
    if (!a.same_dims(b)) throw DataError(std::string(what) + ": dimensions differ");
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(10);
    os << v;
    return os.str();
}

}  // namespace

double patch_stddev_cm(const Raster<float>& depth_m, const Raster<uint8_t>& valid,
                       const Region& patch) {
    check_dims(depth_m, valid, "patch_stddev");
    if (patch.row < 0 || patch.col < 0 || patch.row + patch.height > depth_m.height() ||
        patch.col + patch.width > depth_m.width())
        throw ConfigError("patch_stddev: patch exceeds the raster");

    double sum = 0.0;
    size_t n = 0;
    for (int r = patch.row; r < patch.row + patch.height; ++r) {
        for (int c = patch.col; c < patch.col + patch.width; ++c) {
            if (!valid.at(r, c)) continue;
            sum += double(depth_m.at(r, c));
            ++n;
        }
    }
    if (n < 2) throw DataError("patch_stddev: fewer than 2 valid pixels in patch");
    const double mean = sum / double(n);
    double ss = 0.0;
    for (int r = patch.row; r < patch.row + patch.height; ++r) {
        for (int c = patch.col; c < patch.col + patch.width; ++c) {
            if (!valid.at(r, c)) continue;
            const double e = double(depth_m.at(r, c)) - mean;
            ss += e * e;
        }
    }
    return std::sqrt(ss / double(n - 1)) * 100.0;
}

namespace {

double region_mean_m(const Raster<float>& depth_m, const Raster<uint8_t>& valid,
                     const Region& region) {
    double sum = 0.0;
    size_t n = 0;
    for (int r = region.row; r < region.row + region.height; ++r) {
        for (int c = region.col; c < region.col + region.width; ++c) {
            if (!valid.at(r, c)) continue;
            sum += double(depth_m.at(r, c));
            ++n;
        }
    }
    if (n == 0) throw DataError("panel mean: region has no valid pixels");
    return sum / double(n);
}

}  // namespace

std::array<double, 4> panel_mean_differences_cm(const Raster<float>& depth_m,
                                                const Raster<uint8_t>& valid,
                                                const std::array<Region, 4>& panels) {
    check_dims(depth_m, valid, "panel_mean_differences");
    std::array<double, 4> means{};
    for (int q = 0; q < 4; ++q) means[size_t(q)] = region_mean_m(depth_m, valid, panels[size_t(q)]);
    // adjacent pairs clockwise from top-left: (TL,TR), (TR,BR), (BR,BL), (BL,TL)
    return {std::abs(means[0] - means[1]) * 100.0, std::abs(means[1] - means[2]) * 100.0,
            std::abs(means[2] - means[3]) * 100.0, std::abs(means[3] - means[0]) * 100.0};
}

double depth_rmse_cm(const Raster<float>& estimate_m, const Raster<float>& truth_m,
                     const Raster<uint8_t>& valid) {
    if (!estimate_m.same_dims(truth_m)) throw DataError("rmse: dimensions differ");
    check_dims(estimate_m, valid, "rmse");
    double ss = 0.0;
    size_t n = 0;
    for (size_t i = 0; i < estimate_m.size(); ++i) {
        if (!valid[i]) continue;
        const double e = double(estimate_m[i]) - double(truth_m[i]);
        ss += e * e;
        ++n;
    }
    if (n == 0) throw DataError("rmse: empty valid set");
    return std::sqrt(ss / double(n)) * 100.0;
}

double coverage_fraction(const Raster<uint8_t>& mask) {
    if (mask.empty()) throw DataError("coverage: empty mask");
    return double(count_true(mask)) / double(mask.size());
}

double region_mean_depth_m(const Raster<float>& depth_m, const Raster<uint8_t>& valid,
                           const Raster<uint8_t>& region_mask) {
    check_dims(depth_m, valid, "region_mean");
    check_dims(depth_m, region_mask, "region_mean");
    double sum = 0.0;
    size_t n = 0;
    for (size_t i = 0; i < depth_m.size(); ++i) {
        if (!region_mask[i] || !valid[i]) continue;
        sum += double(depth_m[i]);
        ++n;
    }
    if (n == 0) throw DataError("region_mean: no valid pixels in region");
    return sum / double(n);
}

std::array<Region, 4> centered_patches(const std::array<Region, 4>& panels, int patch_side) {
    std::array<Region, 4> patches{};
    for (size_t q = 0; q < 4; ++q) {
        const Region& p = panels[q];
        if (p.width < patch_side || p.height < patch_side)
            throw ConfigError("centered_patches: panel smaller than the patch");
        patches[q] = {p.row + (p.height - patch_side) / 2, p.col + (p.width - patch_side) / 2,
                      patch_side, patch_side};
    }
    return patches;
}

std::string MetricsReport::to_json() const {
    std::ostringstream os;
    os << "{\n";
    os << "  \"patch_stddev_cm\": [" << fmt(patch_stddev_cm[0]) << ", " << fmt(patch_stddev_cm[1])
       << ", " << fmt(patch_stddev_cm[2]) << ", " << fmt(patch_stddev_cm[3]) << "],\n";
    os << "  \"panel_mean_diff_cm\": [" << fmt(panel_mean_diff_cm[0]) << ", "
       << fmt(panel_mean_diff_cm[1]) << ", " << fmt(panel_mean_diff_cm[2]) << ", "
       << fmt(panel_mean_diff_cm[3]) << "],\n";
    os << "  \"rmse_cm\": " << fmt(rmse_cm) << ",\n";
    os << "  \"pixel_coverage\": " << fmt(pixel_coverage) << ",\n";
    os << "  \"validity_fraction\": " << fmt(validity_fraction) << "\n";
    os << "}\n";
    return os.str();
}

std::string MetricsReport::csv_header() {
    return "patch_std_tl_cm,patch_std_tr_cm,patch_std_br_cm,patch_std_bl_cm,"
           "diff_tl_tr_cm,diff_tr_br_cm,diff_br_bl_cm,diff_bl_tl_cm,"
           "rmse_cm,pixel_coverage,validity_fraction";
}

std::string MetricsReport::to_csv_row() const {
    std::ostringstream os;
    os.precision(10);
    os << patch_stddev_cm[0] << ',' << patch_stddev_cm[1] << ',' << patch_stddev_cm[2] << ','
       << patch_stddev_cm[3] << ',' << panel_mean_diff_cm[0] << ',' << panel_mean_diff_cm[1]
       << ',' << panel_mean_diff_cm[2] << ',' << panel_mean_diff_cm[3] << ',' << rmse_cm << ','
       << pixel_coverage << ',' << validity_fraction;
    return os.str();
}

namespace {

// Compact blue->cyan->yellow->red map, linearly interpolated.
struct MapStop {
    double t;
    uint8_t r, g, b;
};
constexpr MapStop kDepthMap[] = {
    {0.00, 13, 8, 135},   {0.25, 84, 2, 163},   {0.50, 219, 92, 104},
    {0.75, 254, 188, 43}, {1.00, 240, 249, 33},
};

void colormap(double t, uint8_t& r, uint8_t& g, uint8_t& b) {
    t = std::clamp(t, 0.0, 1.0);
    for (size_t i = 1; i < std::size(kDepthMap); ++i) {
        if (t <= kDepthMap[i].t) {
            const auto& a = kDepthMap[i - 1];
            const auto& c = kDepthMap[i];
            const double f = (t - a.t) / (c.t - a.t);
            r = uint8_t(std::lround(a.r + f * (c.r - a.r)));
            g = uint8_t(std::lround(a.g + f * (c.g - a.g)));
            b = uint8_t(std::lround(a.b + f * (c.b - a.b)));
            return;
        }
    }
    r = kDepthMap[std::size(kDepthMap) - 1].r;
    g = kDepthMap[std::size(kDepthMap) - 1].g;
    b = kDepthMap[std::size(kDepthMap) - 1].b;
}

constexpr uint8_t kSentinel[3] = {255, 0, 255};  // invalid pixels

}  // namespace

void render_depth(const Raster<float>& depth_m, const Raster<uint8_t>& valid,
                  const std::string& path, const RenderOptions& options) {
    check_dims(depth_m, valid, "render");
    if (options.intensity_overlay && !options.intensity_overlay->same_dims(depth_m))
        throw DataError("render: intensity overlay dimensions differ");
    if (options.rgb_overlay && (options.rgb_overlay->width() != depth_m.width() ||
                                options.rgb_overlay->height() != depth_m.height()))
        throw DataError("render: rgb overlay dimensions differ");

    double lo = options.min_depth_m;
    double hi = options.max_depth_m;
    if (!(lo < hi)) {
        lo = 1e300;
        hi = -1e300;
        for (size_t i = 0; i < depth_m.size(); ++i) {
            if (!valid[i]) continue;
            lo = std::min(lo, double(depth_m[i]));
            hi = std::max(hi, double(depth_m[i]));
        }
        if (lo > hi) {
            lo = 0.0;
            hi = 1.0;
        }
    }

    double max_intensity = 1.0;
    if (options.intensity_overlay)
        for (size_t i = 0; i < options.intensity_overlay->size(); ++i)
            max_intensity = std::max(max_intensity, double((*options.intensity_overlay)[i]));

    RgbImage image(depth_m.width(), depth_m.height());
    for (int row = 0; row < depth_m.height(); ++row) {
        for (int col = 0; col < depth_m.width(); ++col) {
            if (!valid.at(row, col)) {
                image.set(row, col, kSentinel[0], kSentinel[1], kSentinel[2]);
                continue;
            }
            const double t = hi > lo ? (double(depth_m.at(row, col)) - lo) / (hi - lo) : 0.5;
            uint8_t r, g, b;
            colormap(t, r, g, b);
            if (options.intensity_overlay) {
                const double s =
                    std::sqrt(double(options.intensity_overlay->at(row, col)) / max_intensity);
                r = uint8_t(std::lround(r * s));
                g = uint8_t(std::lround(g * s));
                b = uint8_t(std::lround(b * s));
            }
            if (options.rgb_overlay) {
                r = uint8_t((int(r) + options.rgb_overlay->at(row, col, 0)) / 2);
                g = uint8_t((int(g) + options.rgb_overlay->at(row, col, 1)) / 2);
                b = uint8_t((int(b) + options.rgb_overlay->at(row, col, 2)) / 2);
            }
            image.set(row, col, r, g, b);
        }
    }
    write_png(image, path);
}

}  // namespace glidar
