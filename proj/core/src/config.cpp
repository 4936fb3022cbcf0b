#include "glidar/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "glidar/error.hpp"
#include "glidar/rng.hpp"

namespace glidar {

namespace {

std::string trim(const std::string& s) {
    size_t a = 0, b = s.size();
    while (a < b && std::isspace(uint8_t(s[a]))) ++a;
    while (b > a && std::isspace(uint8_t(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
        if (ch == sep) {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += ch;
        }
    }
    out.push_back(trim(cur));
    return out;
}

/// key -> value map with consumption tracking, so leftover (misspelled)
/// keys can be reported.
class KeyValues {
public:
    KeyValues(const std::string& text, std::string origin) : origin_(std::move(origin)) {
        std::istringstream is(text);
        std::string line;
        int line_no = 0;
        while (std::getline(is, line)) {
            ++line_no;
            const size_t hash = line.find('#');
            if (hash != std::string::npos) line = line.substr(0, hash);
            line = trim(line);
            if (line.empty()) continue;
            const size_t eq = line.find('=');
            if (eq == std::string::npos)
                throw ConfigError(origin_ + ":" + std::to_string(line_no) +
                                  ": expected 'key = value', got '" + line + "'");
            const std::string key = trim(line.substr(0, eq));
            const std::string value = trim(line.substr(eq + 1));
            if (key.empty()) throw ConfigError(origin_ + ": empty key");
            if (values_.count(key))
                throw ConfigError(origin_ + ": duplicate key '" + key + "'");
            values_[key] = value;
        }
    }

    bool has(const std::string& key) const { return values_.count(key) != 0; }

    std::string take(const std::string& key, const std::string& fallback) {
        auto it = values_.find(key);
        if (it == values_.end()) return fallback;
        consumed_.insert(consumed_.end(), key);
        std::string v = it->second;
        values_.erase(it);
        return v;
    }

    double take_double(const std::string& key, double fallback) {
        auto it = values_.find(key);
        if (it == values_.end()) return fallback;
        const double v = parse_double(it->second, key);
        values_.erase(it);
        return v;
    }

    int take_int(const std::string& key, int fallback) {
        const double v = take_double(key, double(fallback));
        const int i = int(std::llround(v));
        if (double(i) != v) throw ConfigError(origin_ + ": key '" + key + "' must be an integer");
        return i;
    }

    uint64_t take_u64(const std::string& key, uint64_t fallback) {
        auto it = values_.find(key);
        if (it == values_.end()) return fallback;
        uint64_t v = 0;
        const std::string s = it->second;
        auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || p != s.data() + s.size())
            throw ConfigError(origin_ + ": key '" + key + "' must be an unsigned integer");
        values_.erase(it);
        return v;
    }

    std::vector<double> take_doubles(const std::string& key, std::vector<double> fallback) {
        auto it = values_.find(key);
        if (it == values_.end()) return fallback;
        std::vector<double> out;
        for (const std::string& part : split(it->second, ','))
            out.push_back(parse_double(part, key));
        values_.erase(it);
        return out;
    }

    void finish() const {
        if (values_.empty()) return;
        std::string msg = origin_ + ": unknown key(s):";
        for (const auto& [k, v] : values_) msg += " '" + k + "'";
        throw ConfigError(msg);
    }

private:
    double parse_double(const std::string& s, const std::string& key) const {
        try {
            size_t pos = 0;
            const double v = std::stod(s, &pos);
            if (pos != s.size()) throw std::invalid_argument(s);
            return v;
        } catch (const std::exception&) {
            throw ConfigError(origin_ + ": key '" + key + "' has a malformed number '" + s + "'");
        }
    }

    std::string origin_;
    std::map<std::string, std::string> values_;
    std::vector<std::string> consumed_;
};

std::array<uint8_t, 3> parse_hex_color(const std::string& s, const std::string& key) {
    if (s.size() != 6 || !std::all_of(s.begin(), s.end(), [](char c) {
            return std::isxdigit(uint8_t(c));
        }))
        throw ConfigError("key '" + key + "' must be a 6-digit hex color, got '" + s + "'");
    auto byte = [&](size_t i) {
        return uint8_t(std::stoi(s.substr(i, 2), nullptr, 16));
    };
    return {byte(0), byte(2), byte(4)};
}

std::string color_to_hex(const std::array<uint8_t, 3>& c) {
    char buf[8];
    std::snprintf(buf, sizeof(buf), "%02X%02X%02X", c[0], c[1], c[2]);
    return buf;
}

/// Shortest decimal form that parses back to the same double.
std::string fmt_double(double v) {
    char buf[32];
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, p);
}

}  // namespace

void RunConfig::validate() const {
    gate.validate();
    scan.validate();
    fit.validate();
    fusion.validate();
    if (base_range_m < 0.0) throw ConfigError("base_range_m must be non-negative");
    if (mean_signal_pp < 0.0 || background_pp < 0.0)
        throw ConfigError("noise rates must be non-negative");
    if (exposure_s_per_bitplane < 0.0) throw ConfigError("exposure must be non-negative");
    if (dcr_base_hz < 0.0 || dcr_hot_hz < 0.0) throw ConfigError("DCR must be non-negative");
    if (dcr_hot_fraction < 0.0 || dcr_hot_fraction > 1.0)
        throw ConfigError("dcr_hot_fraction must be in [0, 1]");
    if (calib_gates.empty()) throw ConfigError("preprocess.calib_gates must be non-empty");
    for (int k : calib_gates)
        if (k < 0 || k >= gate.num_gates)
            throw ConfigError("preprocess.calib_gates entry out of gate range");
    if (hot_threshold_hz <= 0.0) throw ConfigError("preprocess.hot_threshold_hz must be positive");
    if (crop.width <= 0 || crop.height <= 0 || crop.row < 0 || crop.col < 0 ||
        crop.row + crop.height > scan.sensor_height ||
        crop.col + crop.width > scan.sensor_width)
        throw ConfigError("crop must lie inside the sensor");
    for (double f : subsample_fractions)
        if (f <= 0.0 || f > 1.0) throw ConfigError("subsample fractions must be in (0, 1]");
}

Raster<float> RunConfig::make_dcr_map() const {
    Raster<float> dcr(scan.sensor_width, scan.sensor_height, float(dcr_base_hz));
    const size_t n_hot = size_t(std::llround(dcr_hot_fraction * double(dcr.size())));
    // Independent stream so hot-pixel placement does not disturb photon draws.
    Rng rng(seed, 0xDC5EEDULL);
    size_t placed = 0;
    while (placed < n_hot) {
        const size_t i = size_t(rng.uniform_below(dcr.size()));
        if (dcr[i] == float(dcr_hot_hz)) continue;
        dcr[i] = float(dcr_hot_hz);
        ++placed;
    }
    return dcr;
}

NoiseConfig RunConfig::make_noise_config() const {
    NoiseConfig noise;
    noise.mean_signal_pp = mean_signal_pp;
    noise.background_pp = background_pp;
    noise.exposure_s = exposure_s_per_bitplane;
    noise.rng_seed = seed;
    noise.dcr_map = make_dcr_map();
    return noise;
}

RunConfig reference_config() {
    RunConfig cfg;
    cfg.seed = 1;
    cfg.scan.spot_px = 46;  // effective footprint of the defocused ~50 px spot
    cfg.fit.min_amplitude = 5.0;

    // Mannequin stand-in 30 cm in front of the board: head, torso, arm.
    EllipseBlob head{78.0, 150.0, 14.0, 12.0, cfg.base_range_m - 0.30, 0.55, {0x5A, 0x6B, 0x42}};
    EllipseBlob torso{130.0, 150.0, 38.0, 20.0, cfg.base_range_m - 0.30, 0.55,
                      {0x55, 0x64, 0x3C}};
    EllipseBlob arm{118.0, 190.0, 8.0, 26.0, cfg.base_range_m - 0.30, 0.55, {0x55, 0x64, 0x3C}};
    cfg.scene.blobs = {head, torso, arm};
    return cfg;
}

RunConfig small_config() {
    RunConfig cfg;
    cfg.scan.sensor_width = 96;
    cfg.scan.sensor_height = 96;
    cfg.scan.grid_rows = 6;
    cfg.scan.grid_cols = 6;
    cfg.scan.spot_px = 30;
    cfg.scene.board_px = 64;
    cfg.scene.blobs = {{40.0, 40.0, 10.0, 7.0, cfg.base_range_m - 0.30, 0.55, {60, 90, 60}}};
    cfg.crop = {8, 8, 80, 80};
    cfg.fit.min_amplitude = 5.0;
    cfg.fusion.max_iters = 80;
    cfg.subsample_fractions = {0.5, 0.25};
    return cfg;
}

RunConfig parse_run_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << is.rdbuf();
    return parse_run_config_text(buf.str(), path);
}

RunConfig parse_run_config_text(const std::string& text, const std::string& origin) {
    KeyValues kv(text, origin);
    RunConfig cfg;  // defaults = reference config

    cfg.seed = kv.take_u64("seed", cfg.seed);
    cfg.base_range_m = kv.take_double("base_range_m", cfg.base_range_m);

    // scene
    cfg.scene.base_range_m = cfg.base_range_m;
    cfg.scene.board_px = kv.take_int("scene.board_px", cfg.scene.board_px);
    cfg.scene.board_row = kv.take_int("scene.board_row_px", cfg.scene.board_row);
    cfg.scene.board_col = kv.take_int("scene.board_col_px", cfg.scene.board_col);
    {
        auto offs = kv.take_doubles("scene.panel_offsets_m",
                                    {cfg.scene.panel_offsets_m.begin(),
                                     cfg.scene.panel_offsets_m.end()});
        if (offs.size() != 4)
            throw ConfigError("scene.panel_offsets_m must list exactly 4 offsets");
        std::copy(offs.begin(), offs.end(), cfg.scene.panel_offsets_m.begin());
        auto refl = kv.take_doubles("scene.panel_reflectivity",
                                    {cfg.scene.panel_reflectivity.begin(),
                                     cfg.scene.panel_reflectivity.end()});
        if (refl.size() != 4)
            throw ConfigError("scene.panel_reflectivity must list exactly 4 values");
        std::copy(refl.begin(), refl.end(), cfg.scene.panel_reflectivity.begin());
        const std::string colors = kv.take("scene.panel_colors_hex", "");
        if (!colors.empty()) {
            auto parts = split(colors, ',');
            if (parts.size() != 4)
                throw ConfigError("scene.panel_colors_hex must list exactly 4 colors");
            for (size_t q = 0; q < 4; ++q)
                cfg.scene.panel_colors[q] = parse_hex_color(parts[q], "scene.panel_colors_hex");
        }
    }
    cfg.scene.backdrop_offset_m =
        kv.take_double("scene.backdrop_offset_m", cfg.scene.backdrop_offset_m);
    cfg.scene.backdrop_reflectivity =
        kv.take_double("scene.backdrop_reflectivity", cfg.scene.backdrop_reflectivity);
    {
        const std::string c = kv.take("scene.backdrop_color_hex", "");
        if (!c.empty()) cfg.scene.backdrop_color = parse_hex_color(c, "scene.backdrop_color_hex");
    }
    for (int b = 1;; ++b) {
        const std::string prefix = "scene.blob" + std::to_string(b) + ".";
        if (!kv.has(prefix + "center_row_px")) break;
        EllipseBlob blob;
        blob.center_row = kv.take_double(prefix + "center_row_px", 0.0);
        blob.center_col = kv.take_double(prefix + "center_col_px", 0.0);
        blob.radius_row = kv.take_double(prefix + "radius_row_px", 1.0);
        blob.radius_col = kv.take_double(prefix + "radius_col_px", 1.0);
        blob.depth_m = kv.take_double(prefix + "depth_m", cfg.base_range_m);
        blob.reflectivity = kv.take_double(prefix + "reflectivity", 0.5);
        const std::string c = kv.take(prefix + "color_hex", "808080");
        blob.color = parse_hex_color(c, prefix + "color_hex");
        cfg.scene.blobs.push_back(blob);
    }
    // gate
    cfg.gate.gate_width_ns = kv.take_double("gate.gate_width_ns", cfg.gate.gate_width_ns);
    cfg.gate.gate_step_ns = kv.take_double("gate.gate_step_ns", cfg.gate.gate_step_ns);
    cfg.gate.num_gates = kv.take_int("gate.num_gates", cfg.gate.num_gates);
    cfg.gate.edge_width_h = kv.take_double("gate.edge_width_h_steps", cfg.gate.edge_width_h);
    cfg.gate.range_per_step_m =
        kv.take_double("gate.range_per_step_m", cfg.gate.range_per_step_m);
    cfg.gate.index_offset = kv.take_double("gate.index_offset_steps", cfg.gate.index_offset);

    // scan
    cfg.scan.grid_rows = kv.take_int("scan.grid_rows", cfg.scan.grid_rows);
    cfg.scan.grid_cols = kv.take_int("scan.grid_cols", cfg.scan.grid_cols);
    cfg.scan.spot_px = kv.take_int("scan.spot_px", cfg.scan.spot_px);
    cfg.scan.bitplanes_per_position =
        kv.take_int("scan.bitplanes_per_position", cfg.scan.bitplanes_per_position);
    cfg.scan.sensor_width = kv.take_int("scan.sensor_width_px", cfg.scan.sensor_width);
    cfg.scan.sensor_height = kv.take_int("scan.sensor_height_px", cfg.scan.sensor_height);
    {
        const std::string shape = kv.take(
            "scan.spot_shape", cfg.scan.spot_shape == SpotShape::Disc ? "disc" : "square");
        if (shape == "disc")
            cfg.scan.spot_shape = SpotShape::Disc;
        else if (shape == "square")
            cfg.scan.spot_shape = SpotShape::Square;
        else
            throw ConfigError("scan.spot_shape must be 'disc' or 'square'");
    }

    // noise
    cfg.mean_signal_pp = kv.take_double("noise.mean_signal_pp", cfg.mean_signal_pp);
    cfg.background_pp = kv.take_double("noise.background_pp", cfg.background_pp);
    cfg.exposure_s_per_bitplane =
        kv.take_double("noise.exposure_s_per_bitplane", cfg.exposure_s_per_bitplane);
    cfg.dcr_base_hz = kv.take_double("noise.dcr_base_hz", cfg.dcr_base_hz);
    cfg.dcr_hot_fraction = kv.take_double("noise.dcr_hot_fraction", cfg.dcr_hot_fraction);
    cfg.dcr_hot_hz = kv.take_double("noise.dcr_hot_hz", cfg.dcr_hot_hz);

    // preprocess
    {
        auto gates = kv.take_doubles("preprocess.calib_gates",
                                     {cfg.calib_gates.begin(), cfg.calib_gates.end()});
        cfg.calib_gates.clear();
        for (double g : gates) cfg.calib_gates.push_back(int(std::llround(g)));
    }
    cfg.hot_threshold_hz = kv.take_double("preprocess.hot_threshold_hz", cfg.hot_threshold_hz);

    // fit
    cfg.fit.h = kv.take_double("fit.h_steps", cfg.fit.h);
    cfg.fit.max_iters = kv.take_int("fit.max_iters", cfg.fit.max_iters);
    cfg.fit.convergence_tol = kv.take_double("fit.convergence_tol", cfg.fit.convergence_tol);
    cfg.fit.min_amplitude = kv.take_double("fit.min_amplitude_counts", cfg.fit.min_amplitude);
    cfg.fit.min_plateau_samples =
        kv.take_int("fit.min_plateau_samples", cfg.fit.min_plateau_samples);
    {
        const std::string fn = kv.take(
            "fit.edge_function", cfg.fit.edge_function == EdgeFunction::Erf ? "erf" : "arctan");
        if (fn == "erf")
            cfg.fit.edge_function = EdgeFunction::Erf;
        else if (fn == "arctan")
            cfg.fit.edge_function = EdgeFunction::Arctan;
        else
            throw ConfigError("fit.edge_function must be 'erf' or 'arctan'");
    }

    // fusion
    cfg.fusion.tau_d = kv.take_double("fusion.tau_d", cfg.fusion.tau_d);
    cfg.fusion.tau_r = kv.take_double("fusion.tau_r", cfg.fusion.tau_r);
    cfg.fusion.sigma_c = kv.take_double("fusion.sigma_c", cfg.fusion.sigma_c);
    cfg.fusion.sigma_s = kv.take_double("fusion.sigma_s", cfg.fusion.sigma_s);
    cfg.fusion.field_side = kv.take_int("fusion.field_side_px", cfg.fusion.field_side);
    cfg.fusion.max_iters = kv.take_int("fusion.max_iters", cfg.fusion.max_iters);
    cfg.fusion.rel_tol = kv.take_double("fusion.rel_tol", cfg.fusion.rel_tol);
    cfg.fusion.init_step_d = kv.take_double("fusion.init_step_d", cfg.fusion.init_step_d);
    cfg.fusion.init_step_r = kv.take_double("fusion.init_step_r", cfg.fusion.init_step_r);
    {
        std::string def = "rgb";
        if (cfg.fusion.color_transform == ColorTransform::Yuv) def = "yuv";
        if (cfg.fusion.color_transform == ColorTransform::Ycbcr) def = "ycbcr";
        const std::string t = kv.take("fusion.color_transform", def);
        if (t == "rgb")
            cfg.fusion.color_transform = ColorTransform::Rgb;
        else if (t == "yuv")
            cfg.fusion.color_transform = ColorTransform::Yuv;
        else if (t == "ycbcr")
            cfg.fusion.color_transform = ColorTransform::Ycbcr;
        else
            throw ConfigError("fusion.color_transform must be rgb, yuv or ycbcr");
    }

    // fusion likelihood model follows the fit unless explicitly overridden
    cfg.fusion.h = kv.take_double("fusion.h_steps", cfg.fit.h);
    cfg.fusion.edge_function = cfg.fit.edge_function;

    // crop + subsampling + correction
    cfg.crop.row = kv.take_int("crop.row_px", cfg.crop.row);
    cfg.crop.col = kv.take_int("crop.col_px", cfg.crop.col);
    cfg.crop.width = kv.take_int("crop.width_px", cfg.crop.width);
    cfg.crop.height = kv.take_int("crop.height_px", cfg.crop.height);
    {
        auto fr = kv.take_doubles("subsample.fractions", cfg.subsample_fractions);
        cfg.subsample_fractions = fr;
    }
    cfg.correction_constant_m =
        kv.take_double("correction.constant_m", cfg.correction_constant_m);

    kv.finish();
    cfg.validate();
    return cfg;
}

std::string config_to_text(const RunConfig& cfg) {
    std::ostringstream os;
    os << "# glidar run configuration\n";
    os << "seed = " << cfg.seed << "\n";
    os << "base_range_m = " << fmt_double(cfg.base_range_m) << "\n\n";

    os << "scene.board_px = " << cfg.scene.board_px << "\n";
    os << "scene.board_row_px = " << cfg.scene.board_row << "\n";
    os << "scene.board_col_px = " << cfg.scene.board_col << "\n";
    os << "scene.panel_offsets_m = ";
    for (size_t i = 0; i < 4; ++i)
        os << fmt_double(cfg.scene.panel_offsets_m[i]) << (i < 3 ? ", " : "\n");
    os << "scene.panel_reflectivity = ";
    for (size_t i = 0; i < 4; ++i)
        os << fmt_double(cfg.scene.panel_reflectivity[i]) << (i < 3 ? ", " : "\n");
    os << "scene.panel_colors_hex = ";
    for (size_t i = 0; i < 4; ++i)
        os << color_to_hex(cfg.scene.panel_colors[i]) << (i < 3 ? ", " : "\n");
    os << "scene.backdrop_offset_m = " << fmt_double(cfg.scene.backdrop_offset_m) << "\n";
    os << "scene.backdrop_reflectivity = " << fmt_double(cfg.scene.backdrop_reflectivity)
       << "\n";
    os << "scene.backdrop_color_hex = " << color_to_hex(cfg.scene.backdrop_color) << "\n";
    for (size_t b = 0; b < cfg.scene.blobs.size(); ++b) {
        const auto& blob = cfg.scene.blobs[b];
        const std::string p = "scene.blob" + std::to_string(b + 1) + ".";
        os << p << "center_row_px = " << fmt_double(blob.center_row) << "\n";
        os << p << "center_col_px = " << fmt_double(blob.center_col) << "\n";
        os << p << "radius_row_px = " << fmt_double(blob.radius_row) << "\n";
        os << p << "radius_col_px = " << fmt_double(blob.radius_col) << "\n";
        os << p << "depth_m = " << fmt_double(blob.depth_m) << "\n";
        os << p << "reflectivity = " << fmt_double(blob.reflectivity) << "\n";
        os << p << "color_hex = " << color_to_hex(blob.color) << "\n";
    }
    os << "\n";

    os << "gate.gate_width_ns = " << fmt_double(cfg.gate.gate_width_ns) << "\n";
    os << "gate.gate_step_ns = " << fmt_double(cfg.gate.gate_step_ns) << "\n";
    os << "gate.num_gates = " << cfg.gate.num_gates << "\n";
    os << "gate.edge_width_h_steps = " << fmt_double(cfg.gate.edge_width_h) << "\n";
    os << "gate.range_per_step_m = " << fmt_double(cfg.gate.range_per_step_m) << "\n";
    os << "gate.index_offset_steps = " << fmt_double(cfg.gate.index_offset) << "\n\n";

    os << "scan.grid_rows = " << cfg.scan.grid_rows << "\n";
    os << "scan.grid_cols = " << cfg.scan.grid_cols << "\n";
    os << "scan.spot_px = " << cfg.scan.spot_px << "\n";
    os << "scan.spot_shape = " << (cfg.scan.spot_shape == SpotShape::Disc ? "disc" : "square")
       << "\n";
    os << "scan.bitplanes_per_position = " << cfg.scan.bitplanes_per_position << "\n";
    os << "scan.sensor_width_px = " << cfg.scan.sensor_width << "\n";
    os << "scan.sensor_height_px = " << cfg.scan.sensor_height << "\n\n";

    os << "noise.mean_signal_pp = " << fmt_double(cfg.mean_signal_pp) << "\n";
    os << "noise.background_pp = " << fmt_double(cfg.background_pp) << "\n";
    os << "noise.exposure_s_per_bitplane = " << fmt_double(cfg.exposure_s_per_bitplane) << "\n";
    os << "noise.dcr_base_hz = " << fmt_double(cfg.dcr_base_hz) << "\n";
    os << "noise.dcr_hot_fraction = " << fmt_double(cfg.dcr_hot_fraction) << "\n";
    os << "noise.dcr_hot_hz = " << fmt_double(cfg.dcr_hot_hz) << "\n\n";

    os << "preprocess.calib_gates = ";
    for (size_t i = 0; i < cfg.calib_gates.size(); ++i)
        os << cfg.calib_gates[i] << (i + 1 < cfg.calib_gates.size() ? ", " : "\n");
    os << "preprocess.hot_threshold_hz = " << fmt_double(cfg.hot_threshold_hz) << "\n\n";

    os << "fit.h_steps = " << fmt_double(cfg.fit.h) << "\n";
    os << "fit.max_iters = " << cfg.fit.max_iters << "\n";
    os << "fit.convergence_tol = " << fmt_double(cfg.fit.convergence_tol) << "\n";
    os << "fit.min_amplitude_counts = " << fmt_double(cfg.fit.min_amplitude) << "\n";
    os << "fit.min_plateau_samples = " << cfg.fit.min_plateau_samples << "\n";
    os << "fit.edge_function = "
       << (cfg.fit.edge_function == EdgeFunction::Erf ? "erf" : "arctan") << "\n\n";

    os << "fusion.tau_d = " << fmt_double(cfg.fusion.tau_d) << "\n";
    os << "fusion.tau_r = " << fmt_double(cfg.fusion.tau_r) << "\n";
    os << "fusion.sigma_c = " << fmt_double(cfg.fusion.sigma_c) << "\n";
    os << "fusion.sigma_s = " << fmt_double(cfg.fusion.sigma_s) << "\n";
    os << "fusion.field_side_px = " << cfg.fusion.field_side << "\n";
    os << "fusion.max_iters = " << cfg.fusion.max_iters << "\n";
    os << "fusion.rel_tol = " << fmt_double(cfg.fusion.rel_tol) << "\n";
    os << "fusion.init_step_d = " << fmt_double(cfg.fusion.init_step_d) << "\n";
    os << "fusion.init_step_r = " << fmt_double(cfg.fusion.init_step_r) << "\n";
    {
        std::string t = "rgb";
        if (cfg.fusion.color_transform == ColorTransform::Yuv) t = "yuv";
        if (cfg.fusion.color_transform == ColorTransform::Ycbcr) t = "ycbcr";
        os << "fusion.color_transform = " << t << "\n\n";
    }

    os << "crop.row_px = " << cfg.crop.row << "\n";
    os << "crop.col_px = " << cfg.crop.col << "\n";
    os << "crop.width_px = " << cfg.crop.width << "\n";
    os << "crop.height_px = " << cfg.crop.height << "\n\n";

    os << "subsample.fractions = ";
    for (size_t i = 0; i < cfg.subsample_fractions.size(); ++i)
        os << fmt_double(cfg.subsample_fractions[i])
           << (i + 1 < cfg.subsample_fractions.size() ? ", " : "\n");
    os << "correction.constant_m = " << fmt_double(cfg.correction_constant_m) << "\n";
    return os.str();
}

}  // namespace glidar
