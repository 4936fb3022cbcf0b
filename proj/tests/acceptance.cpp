// Acceptance suite: runs the reference scenario end to end and checks each
// shipped guarantee at its stated tolerance, printing one PASS/FAIL line per
// criterion.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "glidar/config.hpp"
#include "glidar/fusion.hpp"
#include "glidar/metrics.hpp"
#include "glidar/preprocess.hpp"
#include "glidar/rng.hpp"

using namespace glidar;
using Clock = std::chrono::steady_clock;

namespace {

double elapsed_s(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
    bool passed = false;
    std::string detail;
};

std::array<Region, 4> crop_panels(const RunConfig& cfg) {
    auto panels = panel_regions(cfg.scene, cfg.scan.sensor_width, cfg.scan.sensor_height);
    for (Region& p : panels) {
        p.row -= cfg.crop.row;
        p.col -= cfg.crop.col;
    }
    return panels;
}

Raster<float> index_to_meters(const Raster<float>& index, const RunConfig& cfg) {
    Raster<float> m(index.width(), index.height(), 0.0f);
    for (size_t i = 0; i < m.size(); ++i)
        m[i] = float(gate_index_to_depth(double(index[i]), cfg.base_range_m, cfg.gate));
    return m;
}

/// Shared products of one noisy acquisition + fit at the reference geometry.
struct NoisyRun {
    FitResult fit;
    Raster<float> depth_m;       // valid pixels only
    Raster<uint8_t> observed;    // observed and not hot
    FloatCube cleaned;
    double sim_fit_seconds = 0.0;
};

NoisyRun run_noisy(const RunConfig& cfg, double fraction) {
    NoisyRun out;
    const auto start = Clock::now();
    const BoardScene board =
        build_panel_board_scene(cfg.scene, cfg.scan.sensor_width, cfg.scan.sensor_height);
    const NoiseConfig noise = cfg.make_noise_config();
    const SubsampleResult sub =
        subsample_scan_positions(cfg.scan, fraction, cfg.seed, cfg.crop);
    const CountCube cube =
        simulate(board.scene, cfg.gate, cfg.scan, noise, cfg.base_range_m, &sub.positions);
    const auto background = estimate_background(cube, cfg.calib_gates);
    const auto hot = detect_hot_pixels(cfg.make_dcr_map(), cfg.hot_threshold_hz);
    out.cleaned = crop_cube(subtract_background(cube, background, hot), cfg.crop);

    const auto hot_crop = crop_raster(hot, cfg.crop);
    out.observed = Raster<uint8_t>(cfg.crop.width, cfg.crop.height, 0);
    for (size_t i = 0; i < out.observed.size(); ++i)
        out.observed[i] = (sub.observed[i] && !hot_crop[i]) ? 1 : 0;
    Raster<uint8_t> exclude(cfg.crop.width, cfg.crop.height, 0);
    for (size_t i = 0; i < exclude.size(); ++i) exclude[i] = out.observed[i] ? 0 : 1;

    out.fit = fit_cube(out.cleaned, &exclude, cfg.fit);
    out.depth_m = index_to_meters(out.fit.depth_index, cfg);
    for (size_t i = 0; i < out.depth_m.size(); ++i)
        if (!out.fit.valid[i]) out.depth_m[i] = 0.0f;
    out.sim_fit_seconds = elapsed_s(start);
    return out;
}

std::array<double, 4> patch_stds_of_run(const RunConfig& cfg, const NoisyRun& run) {
    const auto patches = centered_patches(crop_panels(cfg), 25);
    std::array<double, 4> stds{};
    for (size_t q = 0; q < 4; ++q)
        stds[q] = patch_stddev_cm(run.depth_m, run.fit.valid, patches[q]);
    return stds;
}

// --- criterion 1: noiseless exactness ------------------------------------

Outcome criterion_noiseless_exactness() {
    const auto start = Clock::now();
    RunConfig cfg = reference_config();
    cfg.mean_signal_pp = 0.04;  // low-rate probe: the binary response is linear
    cfg.background_pp = 0.0;
    cfg.dcr_base_hz = 0.0;
    cfg.dcr_hot_fraction = 0.0;
    cfg.dcr_hot_hz = 0.0;

    const BoardScene board =
        build_panel_board_scene(cfg.scene, cfg.scan.sensor_width, cfg.scan.sensor_height);
    const NoiseConfig noise = cfg.make_noise_config();
    const FloatCube cleaned =
        crop_cube(simulate_expected(board.scene, cfg.gate, cfg.scan, noise, cfg.base_range_m),
                  cfg.crop);
    const FitResult fit = fit_cube(cleaned, nullptr, cfg.fit);

    const auto truth = crop_raster(board.scene.depth_m, cfg.crop);
    double max_err = 0.0;
    for (int r = 0; r < cfg.crop.height; ++r) {
        for (int c = 0; c < cfg.crop.width; ++c) {
            if (!fit.valid.at(r, c)) continue;
            const double truth_idx =
                depth_to_gate_index(double(truth.at(r, c)), cfg.base_range_m, cfg.gate);
            max_err = std::max(max_err,
                               std::abs(double(fit.depth_index.at(r, c)) - truth_idx));
        }
    }
    const double validity = double(fit.valid_count()) / double(fit.valid.size());
    const double runtime = elapsed_s(start);

    Outcome out;
    out.passed = max_err <= 0.02 && validity >= 0.999 && runtime < 30.0;
    std::ostringstream os;
    os << "max depth error " << max_err << " steps (<= 0.02), validity " << validity * 100.0
       << "% (>= 99.9%), runtime " << runtime << " s (< 30)";
    out.detail = os.str();
    return out;
}

// --- criteria 2 and 3: noisy panel statistics -----------------------------

Outcome criterion_panel_separations(const NoisyRun& run, const RunConfig& cfg) {
    const auto start = Clock::now();
    const auto patches = centered_patches(crop_panels(cfg), 25);
    const auto stds = patch_stds_of_run(cfg, run);
    const auto diffs = panel_mean_differences_cm(run.depth_m, run.fit.valid, patches);
    const double expected[4] = {10.0, 10.0, 10.0, 30.0};

    bool stds_ok = true;
    for (double s : stds) stds_ok = stds_ok && s >= 0.5 && s <= 1.0;
    bool diffs_ok = true;
    for (int i = 0; i < 4; ++i)
        diffs_ok = diffs_ok && std::abs(diffs[size_t(i)] - expected[i]) <= 1.5;
    const double runtime = run.sim_fit_seconds + elapsed_s(start);

    Outcome out;
    out.passed = stds_ok && diffs_ok && runtime < 120.0;
    std::ostringstream os;
    os.precision(3);
    os << "patch stds (cm) [" << stds[0] << ", " << stds[1] << ", " << stds[2] << ", "
       << stds[3] << "] in [0.5, 1.0]; diffs (cm) [" << diffs[0] << ", " << diffs[1] << ", "
       << diffs[2] << ", " << diffs[3] << "] within 1.5 of (10, 10, 10, 30); runtime "
       << run.sim_fit_seconds << " s (< 120)";
    out.detail = os.str();
    return out;
}

Outcome criterion_statistical_scaling() {
    std::array<double, 4> ratio_sum{};
    for (uint64_t seed : {1ULL, 2ULL, 3ULL}) {
        RunConfig cfg256 = reference_config();
        cfg256.seed = seed;
        RunConfig cfg1024 = cfg256;
        cfg1024.scan.bitplanes_per_position = 1024;
        const auto stds256 = patch_stds_of_run(cfg256, run_noisy(cfg256, 1.0));
        const auto stds1024 = patch_stds_of_run(cfg1024, run_noisy(cfg1024, 1.0));
        for (size_t q = 0; q < 4; ++q) ratio_sum[q] += stds256[q] / stds1024[q];
    }
    Outcome out;
    out.passed = true;
    std::ostringstream os;
    os.precision(3);
    os << "std(256)/std(1024) per panel, 3-seed mean: [";
    for (size_t q = 0; q < 4; ++q) {
        const double ratio = ratio_sum[q] / 3.0;
        out.passed = out.passed && ratio >= 1.6 && ratio <= 2.4;
        os << ratio << (q < 3 ? ", " : "");
    }
    os << "] within 2.0 +/- 20%";
    out.detail = os.str();
    return out;
}

// --- criterion 4: oracle equivalence --------------------------------------

Outcome criterion_oracle_equivalence() {
    FitConfig cfg;
    cfg.h = 1.5;
    Rng rng(4242);
    double worst_d = 0.0, worst_r = 0.0;
    int failures = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const double d_true = 5.0 + 38.0 * rng.uniform();
        const double r_true = 5.0 + 95.0 * rng.uniform();
        std::vector<float> y(51);
        for (int k = 0; k < 51; ++k)
            y[size_t(k)] = float(erf_model(k, d_true, r_true, cfg.h, 0.0));

        const PixelEstimate est = fit_pixel(y, cfg);

        // Brute-force oracle: d grid at 0.01 steps, closed-form amplitude.
        double best_ss = 1e300, oracle_d = 0.0, oracle_r = 0.0;
        double sum_yy = 0.0;
        for (float v : y) sum_yy += double(v) * v;
        for (double d = 0.0; d <= 50.0; d += 0.01) {
            double s_gy = 0.0, s_gg = 0.0;
            for (int k = 0; k < 51; ++k) {
                const double g = 0.5 * (1.0 + std::erf((double(k) - d) / cfg.h));
                s_gy += g * double(y[size_t(k)]);
                s_gg += g * g;
            }
            const double r = s_gg > 0.0 ? std::max(0.0, s_gy / s_gg) : 0.0;
            const double ss = sum_yy - 2.0 * r * s_gy + r * r * s_gg;
            if (ss < best_ss) {
                best_ss = ss;
                oracle_d = d;
                oracle_r = r;
            }
        }
        const double err_d = std::abs(est.d - oracle_d);
        const double err_r = std::abs(est.r - oracle_r) / oracle_r;
        worst_d = std::max(worst_d, err_d);
        worst_r = std::max(worst_r, err_r);
        if (!est.valid || err_d > 0.02 || err_r > 0.01) ++failures;
    }
    Outcome out;
    out.passed = failures == 0;
    std::ostringstream os;
    os << "1000 profiles: worst |d - oracle| " << worst_d << " (<= 0.02 steps), worst relative r error "
       << worst_r << " (<= 1%), failures " << failures;
    out.detail = os.str();
    return out;
}

// --- criteria 5 and 6: fusion ----------------------------------------------

struct FusionOutcome {
    double fraction = 0.0;
    double coverage = 0.0;
    double fused_rmse_cm = 0.0;
    double baseline_rmse_cm = 0.0;
    double blob_observed_fraction = 0.0;
    double blob_mean_error_steps = 0.0;
    bool all_finite = false;
    size_t descent_violations = 0;
    int iterations = 0;
};

FusionOutcome run_fusion_case(const RunConfig& cfg, double fraction) {
    FusionOutcome fo;
    fo.fraction = fraction;

    const BoardScene board =
        build_panel_board_scene(cfg.scene, cfg.scan.sensor_width, cfg.scan.sensor_height);
    const NoisyRun run = run_noisy(cfg, fraction);
    fo.coverage = coverage_fraction(run.observed);

    const RgbImage rgb =
        rescale_rgb(crop_rgb(board.scene.rgb, cfg.crop), cfg.crop.width, cfg.crop.height);
    const WeightField delta =
        compute_color_differences(rgb, cfg.fusion.field_side, cfg.fusion.color_transform);
    const WeightField wr = compute_intensity_weights(delta, cfg.fusion.sigma_c);
    const WeightField wd = compute_depth_weights(wr, cfg.fusion.sigma_s);

    const FusionResult fused = fuse(run.cleaned, run.observed, wd, wr, run.fit.depth_index,
                                    run.fit.intensity, run.fit.valid, cfg.fusion);
    fo.iterations = fused.iterations;
    for (size_t i = 1; i < fused.objective_trace.size(); ++i)
        if (fused.objective_trace[i] > fused.objective_trace[i - 1]) ++fo.descent_violations;

    fo.all_finite = true;
    for (size_t i = 0; i < fused.depth_index.size(); ++i)
        fo.all_finite = fo.all_finite && std::isfinite(fused.depth_index[i]) &&
                        std::isfinite(fused.intensity[i]);

    // Baseline: plain nearest-valid-neighbor fill of the sparse fit.
    Raster<uint8_t> anchored(run.observed.width(), run.observed.height(), 0);
    for (size_t i = 0; i < anchored.size(); ++i)
        anchored[i] = (run.observed[i] && run.fit.valid[i]) ? 1 : 0;
    const Raster<float> baseline_idx = nearest_valid_fill(run.fit.depth_index, anchored);

    const auto truth = crop_raster(board.scene.depth_m, cfg.crop);
    const Raster<uint8_t> all(cfg.crop.width, cfg.crop.height, 1);
    fo.fused_rmse_cm = depth_rmse_cm(index_to_meters(fused.depth_index, cfg), truth, all);
    fo.baseline_rmse_cm = depth_rmse_cm(index_to_meters(baseline_idx, cfg), truth, all);

    // Mannequin stand-in region.
    const auto regions = crop_raster(board.region, cfg.crop);
    Raster<uint8_t> blob(cfg.crop.width, cfg.crop.height, 0);
    size_t blob_px = 0, blob_obs = 0;
    for (size_t i = 0; i < regions.size(); ++i)
        if (regions[i] >= kRegionBlobBase) {
            blob[i] = 1;
            ++blob_px;
            if (run.observed[i]) ++blob_obs;
        }
    fo.blob_observed_fraction = double(blob_obs) / double(blob_px);
    const double blob_truth = region_mean_depth_m(truth, all, blob);
    const double blob_fused =
        region_mean_depth_m(index_to_meters(fused.depth_index, cfg), all, blob);
    fo.blob_mean_error_steps = std::abs(blob_fused - blob_truth) / cfg.gate.range_per_step_m;
    return fo;
}

Outcome criterion_fusion_descent(const std::vector<FusionOutcome>& cases) {
    size_t violations = 0;
    int iterations = 0;
    for (const auto& c : cases) {
        violations += c.descent_violations;
        iterations += c.iterations;
    }
    Outcome out;
    out.passed = violations == 0 && !cases.empty();
    std::ostringstream os;
    os << violations << " objective increases across " << iterations
       << " fusion iterations (must be 0)";
    out.detail = os.str();
    return out;
}

Outcome criterion_hole_filling(const std::vector<FusionOutcome>& cases) {
    Outcome out;
    out.passed = true;
    std::ostringstream os;
    os.precision(3);
    for (const auto& c : cases) {
        out.passed = out.passed && c.all_finite;
        if (c.fraction == 0.05) {
            const double ratio = c.fused_rmse_cm / c.baseline_rmse_cm;
            out.passed = out.passed && ratio <= 0.5;
            os << "5%: fused rmse " << c.fused_rmse_cm << " cm vs baseline "
               << c.baseline_rmse_cm << " cm (ratio " << ratio << " <= 0.5); ";
        }
        if (c.blob_observed_fraction < 0.40) {
            out.passed = out.passed && c.blob_mean_error_steps <= 2.0;
            os << "blob at " << c.fraction * 100 << "%: " << c.blob_observed_fraction * 100.0
               << "% observed, mean error " << c.blob_mean_error_steps << " steps (<= 2); ";
        }
    }
    os << "all outputs finite";
    out.detail = os.str();
    return out;
}

Outcome criterion_coverage_fractions(const RunConfig& cfg) {
    const double paper[3] = {83.7, 61.8, 35.8};
    const double fractions[3] = {0.25, 0.10, 0.05};
    Outcome out;
    out.passed = true;
    std::ostringstream os;
    os.precision(3);
    for (int i = 0; i < 3; ++i) {
        const auto sub =
            subsample_scan_positions(cfg.scan, fractions[i], cfg.seed, cfg.crop);
        const double pct = 100.0 * sub.pixel_coverage;
        out.passed = out.passed && std::abs(pct - paper[i]) <= 10.0;
        os << fractions[i] * 100 << "% -> " << pct << "% (ref " << paper[i] << " +/- 10); ";
    }
    out.detail = os.str();
    return out;
}

Outcome criterion_weight_properties() {
    Outcome out;
    out.passed = true;
    std::ostringstream os;

    // Random RGB: bounds, center, monotonicity in delta.
    RgbImage rgb(32, 32);
    Rng rng(910);
    for (auto& v : rgb.data()) v = uint8_t(rng.uniform_below(256));
    const WeightField delta = compute_color_differences(rgb, 15);
    const WeightField wr = compute_intensity_weights(delta, 10.0);
    const WeightField wd = compute_depth_weights(wr, 0.5);

    size_t bounds_bad = 0, center_bad = 0, monotone_bad = 0;
    for (int r = 0; r < 32; ++r) {
        for (int c = 0; c < 32; ++c) {
            std::vector<std::pair<float, float>> dw;
            for (int m = 0; m < wr.offset_count(); ++m) {
                const float v = wr.at(r, c, m);
                const float vd = wd.at(r, c, m);
                if (v < 0.0f || v > 1.0f || vd < 0.0f || vd > 1.0f) ++bounds_bad;
                if (m == wr.center_offset() && (v != 0.0f || vd != 0.0f)) ++center_bad;
                if (m != wr.center_offset() && delta.at(r, c, m) >= 0.0f)
                    dw.emplace_back(delta.at(r, c, m), v);
            }
            std::sort(dw.begin(), dw.end(),
                      [](const auto& a, const auto& b) { return a.first < b.first; });
            for (size_t i = 1; i < dw.size(); ++i)
                if (dw[i].second > dw[i - 1].second + 1e-7f) ++monotone_bad;
        }
    }
    out.passed = bounds_bad == 0 && center_bad == 0 && monotone_bad == 0;

    // Constant color: all in-bounds non-center weights are equal.
    const RgbImage flat(24, 24, 140);
    const WeightField flat_wr =
        compute_intensity_weights(compute_color_differences(flat, 15), 10.0);
    size_t uniform_bad = 0;
    for (int r = 0; r < 24; ++r)
        for (int c = 0; c < 24; ++c)
            for (int m = 0; m < flat_wr.offset_count(); ++m) {
                if (m == flat_wr.center_offset()) continue;
                auto [dr, dc] = flat_wr.offset(m);
                const bool inb = r + dr >= 0 && r + dr < 24 && c + dc >= 0 && c + dc < 24;
                const float v = flat_wr.at(r, c, m);
                if (inb ? v != 1.0f : v != 0.0f) ++uniform_bad;
            }
    out.passed = out.passed && uniform_bad == 0;

    // 8x8 exhaustive difference oracle.
    RgbImage small(8, 8);
    for (auto& v : small.data()) v = uint8_t(rng.uniform_below(256));
    const WeightField d8 = compute_color_differences(small, 15);
    size_t oracle_bad = 0;
    for (int r = 0; r < 8; ++r)
        for (int c = 0; c < 8; ++c) {
            int m = 0;
            for (int dr = -7; dr <= 7; ++dr)
                for (int dc = -7; dc <= 7; ++dc, ++m) {
                    const int nr = r + dr, nc = c + dc;
                    if (nr < 0 || nr >= 8 || nc < 0 || nc >= 8) {
                        if (d8.at(r, c, m) != -1.0f) ++oracle_bad;
                        continue;
                    }
                    double sum = 0.0;
                    for (int ch = 0; ch < 3; ++ch)
                        sum += std::abs(double(small.at(r, c, ch)) -
                                        double(small.at(nr, nc, ch)));
                    if (std::abs(double(d8.at(r, c, m)) - sum / 3.0) > 1e-4) ++oracle_bad;
                }
        }
    out.passed = out.passed && oracle_bad == 0;

    os << "bounds violations " << bounds_bad << ", center violations " << center_bad
       << ", monotonicity violations " << monotone_bad << ", uniformity violations "
       << uniform_bad << ", oracle mismatches " << oracle_bad << " (all must be 0)";
    out.detail = os.str();
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    int only = 0;
    for (int i = 1; i < argc; ++i)
        if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) only = std::atoi(argv[i + 1]);

    const RunConfig cfg = reference_config();
    std::map<int, Outcome> results;
    auto want = [&](int id) { return only == 0 || only == id; };

    if (want(1)) results[1] = criterion_noiseless_exactness();
    if (want(2)) results[2] = criterion_panel_separations(run_noisy(cfg, 1.0), cfg);
    if (want(3)) results[3] = criterion_statistical_scaling();
    if (want(4)) results[4] = criterion_oracle_equivalence();
    if (want(5) || want(6)) {
        std::vector<FusionOutcome> cases;
        for (double fraction : {0.25, 0.10, 0.05}) cases.push_back(run_fusion_case(cfg, fraction));
        if (want(5)) results[5] = criterion_fusion_descent(cases);
        if (want(6)) results[6] = criterion_hole_filling(cases);
    }
    if (want(7)) results[7] = criterion_coverage_fractions(cfg);
    if (want(8)) results[8] = criterion_weight_properties();

    static const char* names[] = {"",
                                  "noiseless exactness",
                                  "panel separations",
                                  "statistical scaling",
                                  "oracle equivalence",
                                  "fusion descent",
                                  "hole filling",
                                  "coverage fractions",
                                  "weight properties"};
    int failures = 0;
    for (const auto& [id, outcome] : results) {
        std::printf("%s criterion %d (%s): %s\n", outcome.passed ? "PASS" : "FAIL", id,
                    names[id], outcome.detail.c_str());
        if (!outcome.passed) ++failures;
    }
    if (failures) std::printf("%d criterion(s) failed\n", failures);
    return failures == 0 ? 0 : 1;
}
