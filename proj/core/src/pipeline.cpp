#include "glidar/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "glidar/error.hpp"
#include "glidar/io.hpp"
#include "glidar/metrics.hpp"
#include "glidar/png_io.hpp"
#include "glidar/preprocess.hpp"

namespace glidar {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

std::string fraction_suffix(double fraction) {
    if (fraction >= 1.0) return "full";
    char buf[16];
    std::snprintf(buf, sizeof(buf), "f%02d", int(std::lround(fraction * 100.0)));
    return buf;
}

namespace {

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

std::string join(const std::string& dir, const std::string& name) {
    return (fs::path(dir) / name).string();
}

std::string hex64(uint64_t v) {
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

/// Appends one stage's input/output hashes to manifest.json. No
/// timestamps: reruns must be byte-identical.
void record_stage(const std::string& out_dir, const std::string& stage, uint64_t seed,
                  const std::vector<std::string>& inputs,
                  const std::vector<std::string>& outputs) {
    const std::string path = join(out_dir, "manifest.json");
    ordered_json manifest;
    if (fs::exists(path)) {
        std::ifstream is(path);
        try {
            manifest = ordered_json::parse(is);
        } catch (const std::exception&) {
            throw DataError("manifest.json is corrupt in " + out_dir);
        }
    }
    manifest["seed"] = seed;
    ordered_json in_obj = ordered_json::object();
    for (const std::string& p : inputs) in_obj[fs::path(p).filename().string()] = hex64(hash_file(p));
    ordered_json out_obj = ordered_json::object();
    for (const std::string& p : outputs)
        out_obj[fs::path(p).filename().string()] = hex64(hash_file(p));
    manifest["stages"][stage] = {{"inputs", in_obj}, {"outputs", out_obj}};

    std::ofstream os(path);
    os << manifest.dump(2) << "\n";
}

/// Scene and region files are shared by every fraction; write them once.
void ensure_scene_files(const RunConfig& cfg, const std::string& out_dir) {
    const std::string scene_path = join(out_dir, "scene.glr1");
    const std::string regions_path = join(out_dir, "regions.glm1");
    if (fs::exists(scene_path) && fs::exists(regions_path)) return;
    const BoardScene board =
        build_panel_board_scene(cfg.scene, cfg.scan.sensor_width, cfg.scan.sensor_height);
    save_scene(board.scene, scene_path);
    save_mask(board.region, regions_path);
}

std::array<Region, 4> crop_panel_regions(const RunConfig& cfg) {
    auto panels = panel_regions(cfg.scene, cfg.scan.sensor_width, cfg.scan.sensor_height);
    for (Region& p : panels) {
        p.row -= cfg.crop.row;
        p.col -= cfg.crop.col;
        if (p.row < 0 || p.col < 0 || p.row + p.height > cfg.crop.height ||
            p.col + p.width > cfg.crop.width)
            throw ConfigError("pipeline: board panels must lie inside the crop");
    }
    return panels;
}

Raster<float> depth_index_to_meters(const Raster<float>& index, const Raster<uint8_t>& valid,
                                    const RunConfig& cfg) {
    Raster<float> meters(index.width(), index.height(), 0.0f);
    for (int r = 0; r < index.height(); ++r)
        for (int c = 0; c < index.width(); ++c)
            if (valid.at(r, c))
                meters.at(r, c) = float(
                    gate_index_to_depth(double(index.at(r, c)), cfg.base_range_m, cfg.gate));
    return meters;
}

}  // namespace

void cmd_simulate(const RunConfig& cfg, const std::string& out_dir, double fraction) {
    cfg.validate();
    fs::create_directories(out_dir);
    const std::string tag = fraction_suffix(fraction);
    Timer timer;

    ensure_scene_files(cfg, out_dir);
    const Scene scene = load_scene(join(out_dir, "scene.glr1"));

    const SubsampleResult sub =
        subsample_scan_positions(cfg.scan, fraction, cfg.seed, cfg.crop);
    save_mask(sub.observed, join(out_dir, "observed_" + tag + ".glm1"));

    const NoiseConfig noise = cfg.make_noise_config();
    const CountCube cube =
        simulate(scene, cfg.gate, cfg.scan, noise, cfg.base_range_m, &sub.positions);
    save_cube(cube, join(out_dir, "cube_" + tag + ".glc1"));

    record_stage(out_dir, "simulate_" + tag, cfg.seed, {join(out_dir, "scene.glr1")},
                 {join(out_dir, "scene.glr1"), join(out_dir, "regions.glm1"),
                  join(out_dir, "observed_" + tag + ".glm1"),
                  join(out_dir, "cube_" + tag + ".glc1")});
    std::printf("[simulate:%s] %d positions, pixel coverage %.1f%%, %.2f s\n", tag.c_str(),
                int(sub.positions.size()), 100.0 * sub.pixel_coverage, timer.seconds());
}

void cmd_preprocess(const RunConfig& cfg, const std::string& out_dir, double fraction) {
    cfg.validate();
    const std::string tag = fraction_suffix(fraction);
    Timer timer;

    const std::string cube_path = join(out_dir, "cube_" + tag + ".glc1");
    const CountCube cube = load_cube(cube_path);

    const Raster<float> background = estimate_background(cube, cfg.calib_gates);
    save_raster(background, join(out_dir, "background_" + tag + ".glr1"));

    // Hot pixels from the dark-calibration map; the cube-statistics proxy is
    // available through estimate_dcr_proxy for uncalibrated sensors.
    const Raster<uint8_t> hot = detect_hot_pixels(cfg.make_dcr_map(), cfg.hot_threshold_hz);
    save_mask(hot, join(out_dir, "hotmask.glm1"));

    const FloatCube cleaned = subtract_background(cube, background, hot);
    save_float_cube(cleaned, join(out_dir, "cleaned_" + tag + ".glr1"));

    record_stage(out_dir, "preprocess_" + tag, cfg.seed, {cube_path},
                 {join(out_dir, "background_" + tag + ".glr1"), join(out_dir, "hotmask.glm1"),
                  join(out_dir, "cleaned_" + tag + ".glr1")});
    std::printf("[preprocess:%s] hot pixels %zu, %.2f s\n", tag.c_str(), count_true(hot),
                timer.seconds());
}

void cmd_fit(const RunConfig& cfg, const std::string& out_dir, double fraction) {
    cfg.validate();
    const std::string tag = fraction_suffix(fraction);
    Timer timer;

    const std::string cleaned_path = join(out_dir, "cleaned_" + tag + ".glr1");
    const std::string observed_path = join(out_dir, "observed_" + tag + ".glm1");
    const std::string hot_path = join(out_dir, "hotmask.glm1");
    const FloatCube cleaned = crop_cube(load_float_cube(cleaned_path), cfg.crop);
    const Raster<uint8_t> observed = load_mask(observed_path);
    const Raster<uint8_t> hot = crop_raster(load_mask(hot_path), cfg.crop);

    Raster<uint8_t> exclude(cfg.crop.width, cfg.crop.height, 0);
    for (size_t i = 0; i < exclude.size(); ++i) exclude[i] = (hot[i] || !observed[i]) ? 1 : 0;

    const FitResult fit = fit_cube(cleaned, &exclude, cfg.fit);

    Raster<float> depth_m = depth_index_to_meters(fit.depth_index, fit.valid, cfg);
    apply_edge_correction(depth_m, fit.valid, EdgeCorrection{cfg.correction_constant_m, {}});

    save_raster(fit.depth_index, join(out_dir, "depth_fit_index_" + tag + ".glr1"));
    save_raster(depth_m, join(out_dir, "depth_fit_" + tag + ".glr1"));
    save_raster(fit.intensity, join(out_dir, "intensity_fit_" + tag + ".glr1"));
    save_mask(fit.valid, join(out_dir, "valid_fit_" + tag + ".glm1"));

    const double validity = double(fit.valid_count()) / double(fit.valid.size());
    record_stage(out_dir, "fit_" + tag, cfg.seed, {cleaned_path, observed_path, hot_path},
                 {join(out_dir, "depth_fit_index_" + tag + ".glr1"),
                  join(out_dir, "depth_fit_" + tag + ".glr1"),
                  join(out_dir, "intensity_fit_" + tag + ".glr1"),
                  join(out_dir, "valid_fit_" + tag + ".glm1")});
    if (fit.valid_count() == 0)
        std::printf("[fit:%s] warning: no pixel produced a valid fit\n", tag.c_str());
    std::printf("[fit:%s] validity %.2f%%, %.2f s\n", tag.c_str(), 100.0 * validity,
                timer.seconds());
}

namespace {

/// Weight fields depend only on the scene RGB; cache them next to the data.
void ensure_weight_files(const RunConfig& cfg, const std::string& out_dir) {
    const std::string wr_path = join(out_dir, "weights_r.glw1");
    const std::string wd_path = join(out_dir, "weights_d.glw1");
    if (fs::exists(wr_path) && fs::exists(wd_path)) return;

    const Scene scene = load_scene(join(out_dir, "scene.glr1"));
    const RgbImage rgb_crop =
        rescale_rgb(crop_rgb(scene.rgb, cfg.crop), cfg.crop.width, cfg.crop.height);
    const WeightField delta =
        compute_color_differences(rgb_crop, cfg.fusion.field_side, cfg.fusion.color_transform);
    const WeightField wr = compute_intensity_weights(delta, cfg.fusion.sigma_c);
    const WeightField wd = compute_depth_weights(wr, cfg.fusion.sigma_s);
    save_weights(wr, wr_path);
    save_weights(wd, wd_path);
}

}  // namespace

void cmd_fuse(const RunConfig& cfg, const std::string& out_dir, double fraction) {
    cfg.validate();
    const std::string tag = fraction_suffix(fraction);
    Timer timer;

    const std::string cleaned_path = join(out_dir, "cleaned_" + tag + ".glr1");
    const std::string observed_path = join(out_dir, "observed_" + tag + ".glm1");
    const std::string hot_path = join(out_dir, "hotmask.glm1");
    const std::string index_path = join(out_dir, "depth_fit_index_" + tag + ".glr1");
    const std::string intensity_path = join(out_dir, "intensity_fit_" + tag + ".glr1");
    const std::string valid_path = join(out_dir, "valid_fit_" + tag + ".glm1");

    const FloatCube cleaned = crop_cube(load_float_cube(cleaned_path), cfg.crop);
    const Raster<uint8_t> observed_px = load_mask(observed_path);
    const Raster<uint8_t> hot = crop_raster(load_mask(hot_path), cfg.crop);
    const Raster<float> init_index = load_raster(index_path);
    const Raster<float> init_intensity = load_raster(intensity_path);
    const Raster<uint8_t> init_valid = load_mask(valid_path);

    // Hot pixels carry no data: treat them as unobserved.
    Raster<uint8_t> observed(observed_px.width(), observed_px.height(), 0);
    for (size_t i = 0; i < observed.size(); ++i)
        observed[i] = (observed_px[i] && !hot[i]) ? 1 : 0;

    ensure_weight_files(cfg, out_dir);
    const WeightField wr = load_weights(join(out_dir, "weights_r.glw1"));
    const WeightField wd = load_weights(join(out_dir, "weights_d.glw1"));

    const FusionResult fused = fuse(cleaned, observed, wd, wr, init_index, init_intensity,
                                    init_valid, cfg.fusion);
    for (size_t i = 1; i < fused.objective_trace.size(); ++i)
        if (fused.objective_trace[i] > fused.objective_trace[i - 1])
            throw DataError("fusion objective increased at iteration " + std::to_string(i));

    const Raster<uint8_t> all_valid(cfg.crop.width, cfg.crop.height, 1);
    Raster<float> fused_m = depth_index_to_meters(fused.depth_index, all_valid, cfg);
    apply_edge_correction(fused_m, all_valid, EdgeCorrection{cfg.correction_constant_m, {}});

    // Nearest-valid-neighbor fill of the raw fit: the baseline that fusion
    // is measured against.
    Raster<uint8_t> anchored(init_valid.width(), init_valid.height(), 0);
    for (size_t i = 0; i < anchored.size(); ++i)
        anchored[i] = (observed[i] && init_valid[i]) ? 1 : 0;
    Raster<float> baseline_index = nearest_valid_fill(init_index, anchored);
    Raster<float> baseline_m = depth_index_to_meters(baseline_index, all_valid, cfg);
    apply_edge_correction(baseline_m, all_valid, EdgeCorrection{cfg.correction_constant_m, {}});

    save_raster(fused.depth_index, join(out_dir, "depth_fused_index_" + tag + ".glr1"));
    save_raster(fused_m, join(out_dir, "depth_fused_" + tag + ".glr1"));
    save_raster(fused.intensity, join(out_dir, "intensity_fused_" + tag + ".glr1"));
    save_raster(baseline_m, join(out_dir, "depth_baseline_" + tag + ".glr1"));
    {
        std::ofstream trace(join(out_dir, "fuse_trace_" + tag + ".csv"));
        trace << "iteration,objective\n";
        trace.precision(15);
        for (size_t i = 0; i < fused.objective_trace.size(); ++i)
            trace << i << "," << fused.objective_trace[i] << "\n";
    }

    record_stage(out_dir, "fuse_" + tag, cfg.seed,
                 {cleaned_path, observed_path, hot_path, index_path, intensity_path, valid_path},
                 {join(out_dir, "depth_fused_index_" + tag + ".glr1"),
                  join(out_dir, "depth_fused_" + tag + ".glr1"),
                  join(out_dir, "intensity_fused_" + tag + ".glr1"),
                  join(out_dir, "depth_baseline_" + tag + ".glr1"),
                  join(out_dir, "fuse_trace_" + tag + ".csv")});
    std::printf("[fuse:%s] %d iterations, objective %.6g -> %.6g, %.2f s\n", tag.c_str(),
                fused.iterations, fused.objective_trace.front(), fused.objective_trace.back(),
                timer.seconds());
}

namespace {

MetricsReport evaluate_rasters(const RunConfig& cfg, const Raster<float>& depth_m,
                               const Raster<uint8_t>& valid, const Raster<float>& truth_m,
                               const Raster<uint8_t>& observed, double runtime_s) {
    MetricsReport report;
    const auto panels = crop_panel_regions(cfg);
    // 25x25 with a 10 px border on the reference board; shrink for small scenes.
    const int panel_side = std::min(panels[0].width, panels[0].height);
    const int border = std::min(10, std::max(1, panel_side / 6));
    const int patch_side = std::max(3, std::min(25, panel_side - 2 * border));
    const auto patches = centered_patches(panels, patch_side);
    for (size_t q = 0; q < 4; ++q)
        report.patch_stddev_cm[q] = patch_stddev_cm(depth_m, valid, patches[q]);
    // Mean differences are computed on the same patches as the std devs, so
    // foreground objects overlapping the panels do not skew them.
    report.panel_mean_diff_cm = panel_mean_differences_cm(depth_m, valid, patches);
    report.rmse_cm = depth_rmse_cm(depth_m, truth_m, valid);
    report.pixel_coverage = coverage_fraction(observed);
    report.validity_fraction = coverage_fraction(valid);
    report.runtime_seconds = runtime_s;
    return report;
}

void write_report(const MetricsReport& report, const std::string& base_path) {
    {
        std::ofstream os(base_path + ".json");
        os << report.to_json();
    }
    std::ofstream os(base_path + ".csv");
    os << MetricsReport::csv_header() << "\n" << report.to_csv_row() << "\n";
}

}  // namespace

void cmd_eval(const RunConfig& cfg, const std::string& out_dir, double fraction) {
    cfg.validate();
    const std::string tag = fraction_suffix(fraction);
    Timer timer;

    const Scene scene = load_scene(join(out_dir, "scene.glr1"));
    const Raster<float> truth_m = crop_raster(scene.depth_m, cfg.crop);
    const RgbImage rgb = crop_rgb(scene.rgb, cfg.crop);
    const Raster<uint8_t> observed = load_mask(join(out_dir, "observed_" + tag + ".glm1"));

    const Raster<float> depth_fit = load_raster(join(out_dir, "depth_fit_" + tag + ".glr1"));
    const Raster<uint8_t> valid_fit = load_mask(join(out_dir, "valid_fit_" + tag + ".glm1"));
    const Raster<float> intensity_fit =
        load_raster(join(out_dir, "intensity_fit_" + tag + ".glr1"));

    std::vector<std::string> inputs = {join(out_dir, "scene.glr1"),
                                       join(out_dir, "observed_" + tag + ".glm1"),
                                       join(out_dir, "depth_fit_" + tag + ".glr1"),
                                       join(out_dir, "valid_fit_" + tag + ".glm1")};
    std::vector<std::string> outputs;

    const MetricsReport fit_report =
        evaluate_rasters(cfg, depth_fit, valid_fit, truth_m, observed, timer.seconds());
    write_report(fit_report, join(out_dir, "report_fit_" + tag));
    outputs.push_back(join(out_dir, "report_fit_" + tag + ".json"));
    outputs.push_back(join(out_dir, "report_fit_" + tag + ".csv"));

    RenderOptions opts;
    opts.intensity_overlay = &intensity_fit;
    render_depth(depth_fit, valid_fit, join(out_dir, "depth_fit_" + tag + ".png"), opts);
    outputs.push_back(join(out_dir, "depth_fit_" + tag + ".png"));
    write_png(rgb, join(out_dir, "rgb.png"));
    outputs.push_back(join(out_dir, "rgb.png"));

    std::printf("[eval:%s] fit rmse %.2f cm, validity %.1f%%, coverage %.1f%%\n", tag.c_str(),
                fit_report.rmse_cm, 100.0 * fit_report.validity_fraction,
                100.0 * fit_report.pixel_coverage);

    const std::string fused_path = join(out_dir, "depth_fused_" + tag + ".glr1");
    if (fs::exists(fused_path)) {
        const Raster<float> depth_fused = load_raster(fused_path);
        const Raster<float> intensity_fused =
            load_raster(join(out_dir, "intensity_fused_" + tag + ".glr1"));
        const Raster<uint8_t> all_valid(cfg.crop.width, cfg.crop.height, 1);
        const MetricsReport fused_report =
            evaluate_rasters(cfg, depth_fused, all_valid, truth_m, observed, timer.seconds());
        write_report(fused_report, join(out_dir, "report_fused_" + tag));
        inputs.push_back(fused_path);
        outputs.push_back(join(out_dir, "report_fused_" + tag + ".json"));
        outputs.push_back(join(out_dir, "report_fused_" + tag + ".csv"));

        RenderOptions fopts;
        fopts.intensity_overlay = &intensity_fused;
        render_depth(depth_fused, all_valid, join(out_dir, "depth_fused_" + tag + ".png"),
                     fopts);
        outputs.push_back(join(out_dir, "depth_fused_" + tag + ".png"));

        const std::string baseline_path = join(out_dir, "depth_baseline_" + tag + ".glr1");
        if (fs::exists(baseline_path)) {
            const Raster<float> baseline = load_raster(baseline_path);
            const MetricsReport base_report =
                evaluate_rasters(cfg, baseline, all_valid, truth_m, observed, timer.seconds());
            write_report(base_report, join(out_dir, "report_baseline_" + tag));
            outputs.push_back(join(out_dir, "report_baseline_" + tag + ".json"));
            outputs.push_back(join(out_dir, "report_baseline_" + tag + ".csv"));
            std::printf("[eval:%s] fused rmse %.2f cm vs baseline %.2f cm\n", tag.c_str(),
                        fused_report.rmse_cm, base_report.rmse_cm);
        }
    }

    record_stage(out_dir, "eval_" + tag, cfg.seed, inputs, outputs);
}

void cmd_full(const RunConfig& cfg, const std::string& out_dir) {
    cfg.validate();
    cmd_simulate(cfg, out_dir, 1.0);
    cmd_preprocess(cfg, out_dir, 1.0);
    cmd_fit(cfg, out_dir, 1.0);
    cmd_eval(cfg, out_dir, 1.0);
    for (double fraction : cfg.subsample_fractions) {
        cmd_simulate(cfg, out_dir, fraction);
        cmd_preprocess(cfg, out_dir, fraction);
        cmd_fit(cfg, out_dir, fraction);
        cmd_fuse(cfg, out_dir, fraction);
        cmd_eval(cfg, out_dir, fraction);
    }
}

}  // namespace glidar
