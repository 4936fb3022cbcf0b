#include "glidar/acquisition.hpp"

#include <cstring>
#include <unordered_map>

#include "glidar/edge_fit.hpp"
#include "glidar/error.hpp"
#include "glidar/rng.hpp"

namespace glidar {

void GateConfig::validate() const {
    if (gate_step_ns <= 0.0) throw ConfigError("gate: gate_step_ns must be positive");
    if (num_gates < 2) throw ConfigError("gate: num_gates must be at least 2");
    if (edge_width_h < 0.0) throw ConfigError("gate: edge_width_h must be non-negative");
    if (range_per_step_m <= 0.0) throw ConfigError("gate: range_per_step_m must be positive");
    if (gate_width_ns <= 0.0) throw ConfigError("gate: gate_width_ns must be positive");
}

void ScanPattern::validate() const {
    if (grid_rows <= 0 || grid_cols <= 0) throw ConfigError("scan: grid dims must be positive");
    if (spot_px <= 0) throw ConfigError("scan: spot_px must be positive");
    if (bitplanes_per_position <= 0)
        throw ConfigError("scan: bitplanes_per_position must be positive");
    if (sensor_width <= 0 || sensor_height <= 0)
        throw ConfigError("scan: sensor dims must be positive");
}

void NoiseConfig::validate() const {
    if (mean_signal_pp < 0.0) throw ConfigError("noise: mean_signal_pp must be non-negative");
    if (background_pp < 0.0) throw ConfigError("noise: background_pp must be non-negative");
    if (exposure_s < 0.0) throw ConfigError("noise: exposure_s must be non-negative");
    for (size_t i = 0; i < dcr_map.size(); ++i)
        if (dcr_map[i] < 0.0f) throw ConfigError("noise: dark count rates must be non-negative");
}

std::pair<int, int> ScanPattern::spot_center(int p) const {
    const int i = p / grid_cols;
    const int j = p % grid_cols;
    const int row = (2 * i + 1) * sensor_height / (2 * grid_rows);
    const int col = (2 * j + 1) * sensor_width / (2 * grid_cols);
    return {row, col};
}

bool ScanPattern::covers(int p, int row, int col) const {
    auto [cr, cc] = spot_center(p);
    const double half = spot_px / 2.0;
    if (spot_shape == SpotShape::Disc) {
        const double dr = row - cr;
        const double dc = col - cc;
        return dr * dr + dc * dc <= half * half;
    }
    // Square footprint: half-open box of exactly spot_px pixels per side.
    return row >= cr - spot_px / 2 && row < cr - spot_px / 2 + spot_px &&
           col >= cc - spot_px / 2 && col < cc - spot_px / 2 + spot_px;
}

double depth_to_gate_index(double depth_m, double base_range_m, const GateConfig& gate) {
    if (gate.range_per_step_m <= 0.0)
        throw ConfigError("gate: range_per_step_m must be positive");
    return (depth_m - base_range_m) / gate.range_per_step_m + gate.index_offset;
}

double gate_index_to_depth(double index, double base_range_m, const GateConfig& gate) {
    if (gate.range_per_step_m <= 0.0)
        throw ConfigError("gate: range_per_step_m must be positive");
    return (index - gate.index_offset) * gate.range_per_step_m + base_range_m;
}

double expected_rate(const Scene& scene, int row, int col, int k, const GateConfig& gate,
                     const NoiseConfig& noise, double base_range_m) {
    const double d = depth_to_gate_index(scene.depth_m.at(row, col), base_range_m, gate);
    const double r = double(scene.reflectivity.at(row, col)) * noise.mean_signal_pp;
    const double b = noise.background_pp + noise.dcr_hz(row, col) * noise.exposure_s;
    return erf_model(double(k), d, r, gate.edge_width_h, b);
}

namespace {

struct SpotBounds {
    int row_lo, row_hi, col_lo, col_hi;  // inclusive
};

SpotBounds spot_bounds(const ScanPattern& scan, int p) {
    auto [cr, cc] = scan.spot_center(p);
    const int reach = scan.spot_px / 2 + 1;
    return {std::max(0, cr - reach), std::min(scan.sensor_height - 1, cr + reach),
            std::max(0, cc - reach), std::min(scan.sensor_width - 1, cc + reach)};
}

void check_simulate_args(const Scene& scene, const GateConfig& gate, const ScanPattern& scan,
                         const NoiseConfig& noise) {
    gate.validate();
    scan.validate();
    noise.validate();
    validate_scene(scene);
    if (scene.width() != scan.sensor_width || scene.height() != scan.sensor_height)
        throw ConfigError("simulate: scene dimensions must match the scan sensor dimensions");
    if (!noise.dcr_map.empty() && !noise.dcr_map.same_dims(scene.depth_m))
        throw ConfigError("simulate: dcr_map dimensions must match the scene");
}

std::vector<int> all_positions(const ScanPattern& scan) {
    std::vector<int> v(size_t(scan.num_positions()));
    for (int p = 0; p < scan.num_positions(); ++p) v[size_t(p)] = p;
    return v;
}

}  // namespace

CountCube simulate(const Scene& scene, const GateConfig& gate, const ScanPattern& scan,
                   const NoiseConfig& noise, double base_range_m,
                   const std::vector<int>* positions) {
    check_simulate_args(scene, gate, scan, noise);
    const std::vector<int> all = positions ? std::vector<int>() : all_positions(scan);
    const std::vector<int>& pos = positions ? *positions : all;

    CountCube cube(scene.width(), scene.height(), gate.num_gates);

    // Distinct detection probabilities are few on piecewise-constant scenes;
    // cache the sampler setup keyed by the probability's bit pattern.
    std::unordered_map<uint64_t, BinomialDist> dist_cache;
    dist_cache.reserve(1024);

    for (int p : pos) {
        if (p < 0 || p >= scan.num_positions())
            throw ConfigError("simulate: scan position index out of range");
        Rng rng(noise.rng_seed, uint64_t(p));
        const SpotBounds bb = spot_bounds(scan, p);
        for (int row = bb.row_lo; row <= bb.row_hi; ++row) {
            for (int col = bb.col_lo; col <= bb.col_hi; ++col) {
                if (!scan.covers(p, row, col)) continue;
                for (int k = 0; k < gate.num_gates; ++k) {
                    const double lambda =
                        expected_rate(scene, row, col, k, gate, noise, base_range_m);
                    const double prob = detection_probability(lambda);
                    uint64_t key;
                    static_assert(sizeof(key) == sizeof(prob));
                    std::memcpy(&key, &prob, sizeof(key));
                    auto it = dist_cache.find(key);
                    if (it == dist_cache.end()) {
                        if (dist_cache.size() > 100000) dist_cache.clear();
                        it = dist_cache
                                 .emplace(key, BinomialDist(scan.bitplanes_per_position, prob))
                                 .first;
                    }
                    cube.at(k, row, col) =
                        uint16_t(cube.at(k, row, col) + it->second.draw(rng));
                }
            }
        }
    }
    return cube;
}

FloatCube simulate_expected(const Scene& scene, const GateConfig& gate, const ScanPattern& scan,
                            const NoiseConfig& noise, double base_range_m,
                            const std::vector<int>* positions) {
    check_simulate_args(scene, gate, scan, noise);
    const std::vector<int> all = positions ? std::vector<int>() : all_positions(scan);
    const std::vector<int>& pos = positions ? *positions : all;

    FloatCube cube(scene.width(), scene.height(), gate.num_gates);
    for (int p : pos) {
        if (p < 0 || p >= scan.num_positions())
            throw ConfigError("simulate: scan position index out of range");
        const SpotBounds bb = spot_bounds(scan, p);
        for (int row = bb.row_lo; row <= bb.row_hi; ++row) {
            for (int col = bb.col_lo; col <= bb.col_hi; ++col) {
                if (!scan.covers(p, row, col)) continue;
                for (int k = 0; k < gate.num_gates; ++k) {
                    const double lambda =
                        expected_rate(scene, row, col, k, gate, noise, base_range_m);
                    cube.at(k, row, col) += float(scan.bitplanes_per_position *
                                                  detection_probability(lambda));
                }
            }
        }
    }
    return cube;
}

Raster<uint16_t> coverage_multiplicity(const ScanPattern& scan,
                                       const std::vector<int>* positions) {
    scan.validate();
    const std::vector<int> all = positions ? std::vector<int>() : all_positions(scan);
    const std::vector<int>& pos = positions ? *positions : all;

    Raster<uint16_t> mult(scan.sensor_width, scan.sensor_height, 0);
    for (int p : pos) {
        if (p < 0 || p >= scan.num_positions())
            throw ConfigError("coverage: scan position index out of range");
        const SpotBounds bb = spot_bounds(scan, p);
        for (int row = bb.row_lo; row <= bb.row_hi; ++row)
            for (int col = bb.col_lo; col <= bb.col_hi; ++col)
                if (scan.covers(p, row, col)) mult.at(row, col)++;
    }
    return mult;
}

}  // namespace glidar
