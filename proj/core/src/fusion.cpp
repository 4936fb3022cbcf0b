#include "glidar/fusion.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <queue>
#include <numeric>

#include "glidar/error.hpp"
#include "glidar/rng.hpp"

namespace glidar {

namespace {
constexpr double kLogEps = 1e-12;
constexpr double kSqrtPi = 1.7724538509055160273;
constexpr double kPi = 3.14159265358979323846;
}  // namespace

void FusionConfig::validate() const {
    if (tau_d < 0.0 || tau_r < 0.0) throw ConfigError("fusion: tau must be non-negative");
    if (sigma_c <= 0.0) throw ConfigError("fusion: sigma_c must be positive");
    if (sigma_s <= 0.0) throw ConfigError("fusion: sigma_s must be positive");
    if (field_side < 3 || field_side % 2 == 0)
        throw ConfigError("fusion: field_side must be odd and at least 3");
    if (h < 0.0) throw ConfigError("fusion: h must be non-negative");
    if (max_iters <= 0) throw ConfigError("fusion: max_iters must be positive");
    if (rel_tol <= 0.0) throw ConfigError("fusion: rel_tol must be positive");
    if (init_step_d <= 0.0 || init_step_r <= 0.0)
        throw ConfigError("fusion: initial steps must be positive");
}

RgbImage rescale_rgb(const RgbImage& src, int target_width, int target_height) {
    if (target_width <= 0 || target_height <= 0)
        throw ConfigError("rescale: target dimensions must be positive");
    if (src.width() == target_width && src.height() == target_height) return src;

    RgbImage out(target_width, target_height);
    const double row_scale =
        target_height > 1 ? double(src.height() - 1) / double(target_height - 1) : 0.0;
    const double col_scale =
        target_width > 1 ? double(src.width() - 1) / double(target_width - 1) : 0.0;
    for (int r = 0; r < target_height; ++r) {
        const double src_r = r * row_scale;
        const int r0 = std::min(int(src_r), src.height() - 1);
        const int r1 = std::min(r0 + 1, src.height() - 1);
        const double fr = src_r - r0;
        for (int c = 0; c < target_width; ++c) {
            const double src_c = c * col_scale;
            const int c0 = std::min(int(src_c), src.width() - 1);
            const int c1 = std::min(c0 + 1, src.width() - 1);
            const double fc = src_c - c0;
            for (int ch = 0; ch < 3; ++ch) {
                const double top = (1.0 - fc) * src.at(r0, c0, ch) + fc * src.at(r0, c1, ch);
                const double bot = (1.0 - fc) * src.at(r1, c0, ch) + fc * src.at(r1, c1, ch);
                const double v = (1.0 - fr) * top + fr * bot;
                out.at(r, c, ch) = uint8_t(std::clamp(std::lround(v), 0L, 255L));
            }
        }
    }
    return out;
}

namespace {

struct Channels {
    double c0, c1, c2;
};

Channels transform_pixel(const RgbImage& rgb, int row, int col, ColorTransform t) {
    const double r = rgb.at(row, col, 0);
    const double g = rgb.at(row, col, 1);
    const double b = rgb.at(row, col, 2);
    switch (t) {
        case ColorTransform::Rgb:
            return {r, g, b};
        case ColorTransform::Yuv:
            return {0.299 * r + 0.587 * g + 0.114 * b, -0.14713 * r - 0.28886 * g + 0.436 * b,
                    0.615 * r - 0.51499 * g - 0.10001 * b};
        case ColorTransform::Ycbcr:
            return {0.299 * r + 0.587 * g + 0.114 * b,
                    128.0 - 0.168736 * r - 0.331264 * g + 0.5 * b,
                    128.0 + 0.5 * r - 0.418688 * g - 0.081312 * b};
    }
    return {r, g, b};
}

}  // namespace

WeightField compute_color_differences(const RgbImage& rgb, int field_side,
                                      ColorTransform transform) {
    if (field_side < 1 || field_side % 2 == 0)
        throw ConfigError("fusion: field_side must be odd");

    const int W = rgb.width();
    const int H = rgb.height();
    const int half = field_side / 2;
    WeightField delta(W, H, field_side);

    // Precompute the transformed channels once.
    std::vector<Channels> chan(size_t(W) * H);
    for (int r = 0; r < H; ++r)
        for (int c = 0; c < W; ++c)
            chan[size_t(r) * W + c] = transform_pixel(rgb, r, c, transform);

    for (int r = 0; r < H; ++r) {
        for (int c = 0; c < W; ++c) {
            const Channels& a = chan[size_t(r) * W + c];
            float* out = &delta.data()[(size_t(r) * W + c) * delta.offset_count()];
            int m = 0;
            for (int dr = -half; dr <= half; ++dr) {
                const int nr = r + dr;
                for (int dc = -half; dc <= half; ++dc, ++m) {
                    const int nc = c + dc;
                    if (nr < 0 || nr >= H || nc < 0 || nc >= W) {
                        out[m] = -1.0f;  // absent
                        continue;
                    }
                    const Channels& b = chan[size_t(nr) * W + nc];
                    out[m] = float((std::abs(a.c0 - b.c0) + std::abs(a.c1 - b.c1) +
                                    std::abs(a.c2 - b.c2)) /
                                   3.0);
                }
            }
        }
    }
    return delta;
}

WeightField compute_intensity_weights(const WeightField& delta, double sigma_c) {
    if (sigma_c <= 0.0) throw ConfigError("fusion: sigma_c must be positive");
    WeightField w(delta.width(), delta.height(), delta.field_side());
    const int center = delta.center_offset();
    const int n_off = delta.offset_count();
    for (size_t px = 0; px < size_t(delta.width()) * delta.height(); ++px) {
        const float* in = &delta.data()[px * n_off];
        float* out = &w.data()[px * n_off];
        for (int m = 0; m < n_off; ++m) {
            if (m == center || in[m] < 0.0f)
                out[m] = 0.0f;
            else
                out[m] = float(std::exp(-double(in[m]) / sigma_c));
        }
    }
    return w;
}

WeightField compute_depth_weights(const WeightField& intensity_weights, double sigma_s) {
    if (sigma_s <= 0.0) throw ConfigError("fusion: sigma_s must be positive");
    const int n_off = intensity_weights.offset_count();

    // Distance factor per offset, normalized by the largest in-field distance.
    std::vector<double> factor(static_cast<size_t>(n_off), 0.0);
    double dist_max = 0.0;
    for (int m = 0; m < n_off; ++m)
        dist_max = std::max(dist_max, intensity_weights.offset_distance(m));
    for (int m = 0; m < n_off; ++m)
        factor[size_t(m)] =
            std::exp(-intensity_weights.offset_distance(m) / (dist_max * sigma_s));

    WeightField w(intensity_weights.width(), intensity_weights.height(),
                  intensity_weights.field_side());
    for (size_t px = 0; px < size_t(w.width()) * w.height(); ++px) {
        const float* in = &intensity_weights.data()[px * n_off];
        float* out = &w.data()[px * n_off];
        for (int m = 0; m < n_off; ++m) out[m] = float(double(in[m]) * factor[size_t(m)]);
    }
    return w;
}

namespace {

inline double edge_shape(EdgeFunction fn, double x, double h) {
    if (fn == EdgeFunction::Erf) return 0.5 * (1.0 + std::erf(x / h));
    return 0.5 * (1.0 + (2.0 / kPi) * std::atan(x / h));
}

inline double edge_shape_dderiv(EdgeFunction fn, double x, double h) {
    if (fn == EdgeFunction::Erf) return -std::exp(-(x / h) * (x / h)) / (h * kSqrtPi);
    return -h / (kPi * (h * h + x * x));
}

void check_nll_args(const Raster<float>& d, const Raster<float>& r, const FloatCube& cube,
                    const Raster<uint8_t>& observed) {
    if (!d.same_dims(cube.width, cube.height) || !r.same_dims(cube.width, cube.height) ||
        !observed.same_dims(cube.width, cube.height))
        throw DataError("fusion: raster and cube dimensions differ");
}

}  // namespace

double negative_log_likelihood(const Raster<float>& depth_index, const Raster<float>& intensity,
                               const FloatCube& cleaned, const Raster<uint8_t>& observed,
                               double h, EdgeFunction fn) {
    check_nll_args(depth_index, intensity, cleaned, observed);
    const size_t plane = size_t(cleaned.width) * cleaned.height;
    double nll = 0.0;
    for (size_t i = 0; i < plane; ++i) {
        if (!observed[i]) continue;
        const double d = depth_index[i];
        const double r = intensity[i];
        for (int k = 0; k < cleaned.num_gates; ++k) {
            const double lambda =
                h == 0.0 ? (double(k) > d ? r : (double(k) == d ? 0.5 * r : 0.0))
                         : r * edge_shape(fn, double(k) - d, h);
            const double y = cleaned.values[size_t(k) * plane + i];
            nll += lambda - y * std::log(lambda + kLogEps);
        }
    }
    return nll;
}

Raster<float> nearest_valid_fill(const Raster<float>& values, const Raster<uint8_t>& valid) {
    if (!values.same_dims(valid)) throw DataError("fill: dims differ");
    const int W = values.width();
    const int H = values.height();
    size_t n_valid = count_true(valid);
    if (n_valid == 0) throw DataError("fill: no valid pixels to propagate from");

    Raster<float> out = values;
    Raster<uint8_t> visited = valid;
    std::deque<std::pair<int, int>> queue;
    for (int r = 0; r < H; ++r)
        for (int c = 0; c < W; ++c)
            if (valid.at(r, c)) queue.emplace_back(r, c);

    static constexpr int dr[4] = {-1, 1, 0, 0};
    static constexpr int dc[4] = {0, 0, -1, 1};
    while (!queue.empty()) {
        auto [r, c] = queue.front();
        queue.pop_front();
        for (int i = 0; i < 4; ++i) {
            const int nr = r + dr[i];
            const int nc = c + dc[i];
            if (nr < 0 || nr >= H || nc < 0 || nc >= W || visited.at(nr, nc)) continue;
            visited.at(nr, nc) = 1;
            out.at(nr, nc) = out.at(r, c);
            queue.emplace_back(nr, nc);
        }
    }
    return out;
}

Raster<float> guided_fill(const Raster<float>& values, const Raster<uint8_t>& valid,
                          const WeightField& intensity_weights) {
    if (!values.same_dims(valid)) throw DataError("fill: dims differ");
    if (intensity_weights.width() != values.width() ||
        intensity_weights.height() != values.height())
        throw DataError("fill: weight field dims differ");
    if (count_true(valid) == 0) throw DataError("fill: no valid pixels to propagate from");

    const int W = values.width();
    const int H = values.height();
    const int side = intensity_weights.field_side();
    const int center = intensity_weights.center_offset();

    // Cost of stepping to a 4-neighbor: the color dissimilarity encoded in
    // the adjacent intensity weight, plus a small per-step term so that among
    // equally-colored paths the shorter one wins.
    const int offset_up = center - side;
    const int offset_down = center + side;
    const int offset_left = center - 1;
    const int offset_right = center + 1;
    auto step_cost = [&](int row, int col, int m) {
        const double w = double(intensity_weights.at(row, col, m));
        return -std::log(std::max(w, 1e-30)) + 0.05;
    };

    // Multi-source Dijkstra; the (cost, index) ordering makes ties
    // deterministic.
    std::vector<double> cost(size_t(W) * H, 1e300);
    Raster<float> out = values;
    using Node = std::pair<double, size_t>;
    std::priority_queue<Node, std::vector<Node>, std::greater<>> queue;
    for (int r = 0; r < H; ++r)
        for (int c = 0; c < W; ++c)
            if (valid.at(r, c)) {
                cost[size_t(r) * W + c] = 0.0;
                queue.emplace(0.0, size_t(r) * W + c);
            }

    while (!queue.empty()) {
        const auto [d, i] = queue.top();
        queue.pop();
        if (d > cost[i]) continue;
        const int r = int(i / size_t(W));
        const int c = int(i % size_t(W));
        const int moves[4][3] = {{-1, 0, offset_up},
                                 {1, 0, offset_down},
                                 {0, -1, offset_left},
                                 {0, 1, offset_right}};
        for (const auto& mv : moves) {
            const int nr = r + mv[0];
            const int nc = c + mv[1];
            if (nr < 0 || nr >= H || nc < 0 || nc >= W || valid.at(nr, nc)) continue;
            const double nd = d + step_cost(r, c, mv[2]);
            const size_t ni = size_t(nr) * W + nc;
            if (nd < cost[ni]) {
                cost[ni] = nd;
                out.at(nr, nc) = out.at(r, c);
                queue.emplace(nd, ni);
            }
        }
    }
    return out;
}

namespace {

/// Total weighted-l1 coupling of one raster:
/// sum over pixels n and in-bounds offsets m of w[n][m] * |x_n - x_{n+m}|.
double weighted_l1_sum(const Raster<float>& x, const WeightField& w) {
    const int W = x.width();
    const int H = x.height();
    const int side = w.field_side();
    const int half = side / 2;
    double total = 0.0;
    for (int r = 0; r < H; ++r) {
        for (int c = 0; c < W; ++c) {
            const float* wp = w.row_ptr(r, c);
            const double xn = x.at(r, c);
            int m = 0;
            for (int dr = -half; dr <= half; ++dr) {
                const int nr = r + dr;
                if (nr < 0 || nr >= H) {
                    m += side;
                    continue;
                }
                const float* xrow = &x.data()[size_t(nr) * W];
                for (int dc = -half; dc <= half; ++dc, ++m) {
                    const int nc = c + dc;
                    if (nc < 0 || nc >= W) continue;
                    const float wv = wp[m];
                    if (wv == 0.0f) continue;
                    total += double(wv) * std::abs(xn - double(xrow[nc]));
                }
            }
        }
    }
    return total;
}

struct Objective {
    double nll = 0.0;
    double tv_d = 0.0;
    double tv_r = 0.0;
    double total() const { return nll + tv_d + tv_r; }
};

Objective evaluate_objective(const Raster<float>& d, const Raster<float>& r,
                             const FloatCube& cleaned, const Raster<uint8_t>& observed,
                             const WeightField& wd, const WeightField& wr,
                             const FusionConfig& cfg) {
    Objective obj;
    obj.nll = negative_log_likelihood(d, r, cleaned, observed, cfg.h, cfg.edge_function);
    if (cfg.tau_d > 0.0) obj.tv_d = cfg.tau_d * weighted_l1_sum(d, wd);
    if (cfg.tau_r > 0.0) obj.tv_r = cfg.tau_r * weighted_l1_sum(r, wr);
    return obj;
}

/// Gradient of the likelihood term with respect to d and r (zero on
/// unobserved pixels).
void nll_gradient(const Raster<float>& d, const Raster<float>& r, const FloatCube& cleaned,
                  const Raster<uint8_t>& observed, const FusionConfig& cfg,
                  Raster<float>& grad_d, Raster<float>& grad_r) {
    const size_t plane = size_t(cleaned.width) * cleaned.height;
    for (size_t i = 0; i < plane; ++i) {
        grad_d[i] = 0.0f;
        grad_r[i] = 0.0f;
        if (!observed[i]) continue;
        const double dn = d[i];
        const double rn = r[i];
        double gd = 0.0, gr = 0.0;
        for (int k = 0; k < cleaned.num_gates; ++k) {
            const double x = double(k) - dn;
            const double g = edge_shape(cfg.edge_function, x, cfg.h);
            const double lambda = rn * g;
            const double y = cleaned.values[size_t(k) * plane + i];
            const double common = 1.0 - y / (lambda + kLogEps);
            gd += common * rn * edge_shape_dderiv(cfg.edge_function, x, cfg.h);
            gr += common * g;
        }
        grad_d[i] = float(gd);
        grad_r[i] = float(gr);
    }
}

/// Exact minimizer of (x - z)^2 / (2t) + sum_j c_j |x - b_j| over x >= 0.
/// Breakpoints must be sorted ascending; c_j >= 0.
double prox_weighted_l1(double z, double t, const std::pair<float, float>* bc, int count) {
    double s = 0.0;
    for (int j = 0; j < count; ++j) s -= bc[j].second;
    for (int j = 0; j < count; ++j) {
        const double b = bc[j].first;
        double x = z - t * s;  // candidate on the interval left of b
        if (x <= b) return std::max(0.0, x);
        s += 2.0 * double(bc[j].second);
        x = z - t * s;
        if (x <= b) return std::max(0.0, b);  // pinned at the kink
    }
    return std::max(0.0, z - t * s);
}

/// Jacobi proximal sweep: each pixel minimizes its quadratic-plus-weighted-l1
/// subproblem against the reference (previous iterate) values of its field.
/// Both edge directions are gathered so the coupling matches the objective.
/// Observed pixels use the forward-backward step t; unobserved pixels carry
/// no data term, so their subproblem is solved with the quadratic relaxed to
/// nothing, which is the exact weighted-median minimizer of their coordinate.
void prox_sweep(const Raster<float>& stepped, const Raster<float>& ref,
                const Raster<uint8_t>& observed, const WeightField& w, double t_times_tau,
                Raster<float>& out) {
    const int W = stepped.width();
    const int H = stepped.height();
    const int side = w.field_side();
    const int half = side / 2;
    const int n_off = w.offset_count();
    constexpr double kMedianScale = 1e9;  // relaxes the quadratic to a tie-break
    std::vector<std::pair<float, float>> bc(static_cast<size_t>(n_off));

    for (int r = 0; r < H; ++r) {
        for (int c = 0; c < W; ++c) {
            const float* wp = w.row_ptr(r, c);
            int count = 0;
            int m = 0;
            for (int dr = -half; dr <= half; ++dr) {
                const int nr = r + dr;
                if (nr < 0 || nr >= H) {
                    m += side;
                    continue;
                }
                for (int dc = -half; dc <= half; ++dc, ++m) {
                    const int nc = c + dc;
                    if (nc < 0 || nc >= W) continue;
                    // forward weight of this pixel plus the mirrored weight of
                    // the neighbor pointing back at us
                    const double coeff =
                        double(wp[m]) + double(w.at(nr, nc, w.mirror(m)));
                    if (coeff <= 0.0) continue;
                    bc[size_t(count++)] = {ref.at(nr, nc), float(coeff)};
                }
            }
            const double z = stepped.at(r, c);
            const double scale = observed.at(r, c) ? t_times_tau : kMedianScale;
            if (count == 0 || scale == 0.0) {
                out.at(r, c) = float(std::max(0.0, z));
                continue;
            }
            std::sort(bc.begin(), bc.begin() + count,
                      [](const auto& a, const auto& b) { return a.first < b.first; });
            for (int j = 0; j < count; ++j) bc[size_t(j)].second *= float(scale);
            out.at(r, c) = float(prox_weighted_l1(z, 1.0, bc.data(), count));
        }
    }
}

}  // namespace

FusionResult fuse(const FloatCube& cleaned, const Raster<uint8_t>& observed,
                  const WeightField& depth_weights, const WeightField& intensity_weights,
                  const Raster<float>& init_depth_index, const Raster<float>& init_intensity,
                  const Raster<uint8_t>& init_valid, const FusionConfig& config) {
    config.validate();
    check_nll_args(init_depth_index, init_intensity, cleaned, observed);
    if (depth_weights.width() != cleaned.width || depth_weights.height() != cleaned.height ||
        intensity_weights.width() != cleaned.width ||
        intensity_weights.height() != cleaned.height)
        throw DataError("fusion: weight field dimensions differ from the cube");
    if (count_true(observed) == 0)
        throw DataError("fusion: observation mask is empty, nothing anchors the solution");

    // Anchor pixels: observed and carrying a usable initial estimate.
    Raster<uint8_t> anchored(observed.width(), observed.height(), 0);
    size_t n_anchor = 0;
    for (size_t i = 0; i < observed.size(); ++i) {
        anchored[i] = (observed[i] && init_valid[i]) ? 1 : 0;
        n_anchor += anchored[i];
    }
    if (n_anchor == 0)
        throw DataError("fusion: no observed pixel has a valid initial estimate");

    Raster<float> d = guided_fill(init_depth_index, anchored, intensity_weights);
    Raster<float> r = guided_fill(init_intensity, anchored, intensity_weights);
    for (size_t i = 0; i < d.size(); ++i) {
        d[i] = std::max(0.0f, d[i]);
        r[i] = std::max(0.0f, r[i]);
    }

    FusionResult result;
    Objective current = evaluate_objective(d, r, cleaned, observed, depth_weights,
                                           intensity_weights, config);
    result.objective_trace.push_back(current.total());

    Raster<float> grad_d(d.width(), d.height(), 0.0f);
    Raster<float> grad_r(d.width(), d.height(), 0.0f);
    Raster<float> stepped_d(d.width(), d.height(), 0.0f);
    Raster<float> stepped_r(d.width(), d.height(), 0.0f);
    Raster<float> cand_d(d.width(), d.height(), 0.0f);
    Raster<float> cand_r(d.width(), d.height(), 0.0f);

    double t_d = config.init_step_d;
    double t_r = config.init_step_r;
    int stall_count = 0;

    for (int iter = 0; iter < config.max_iters; ++iter) {
        nll_gradient(d, r, cleaned, observed, config, grad_d, grad_r);
        for (size_t i = 0; i < d.size(); ++i) {
            stepped_d[i] = float(double(d[i]) - t_d * double(grad_d[i]));
            stepped_r[i] = float(double(r[i]) - t_r * double(grad_r[i]));
        }
        prox_sweep(stepped_d, d, observed, depth_weights, t_d * config.tau_d, cand_d);
        prox_sweep(stepped_r, r, observed, intensity_weights, t_r * config.tau_r, cand_r);

        // Line search along the segment from the current iterate to the
        // candidate; rejected steps damp both the gradient move and the
        // median jump, so the trace cannot increase.
        bool accepted = false;
        Objective next;
        double alpha = 1.0;
        for (int attempt = 0; attempt < 40; ++attempt) {
            if (attempt > 0) {
                for (size_t i = 0; i < d.size(); ++i) {
                    cand_d[i] = float(double(d[i]) +
                                      alpha * (double(cand_d[i]) - double(d[i])));
                    cand_r[i] = float(double(r[i]) +
                                      alpha * (double(cand_r[i]) - double(r[i])));
                }
            }
            next = evaluate_objective(cand_d, cand_r, cleaned, observed, depth_weights,
                                      intensity_weights, config);
            if (next.total() <= current.total()) {
                accepted = true;
                break;
            }
            alpha = 0.5;  // each pass halves the remaining segment
        }
        if (!accepted) break;  // no point on the segment descends: stationary

        std::swap(d, cand_d);
        std::swap(r, cand_r);
        const double improvement = current.total() - next.total();
        current = next;
        result.objective_trace.push_back(current.total());
        result.iterations = iter + 1;

        if (alpha == 1.0) {
            t_d = std::min(t_d * 1.25, config.init_step_d * 1e3);
            t_r = std::min(t_r * 1.25, config.init_step_r * 1e3);
        } else {
            t_d = std::max(t_d * 0.5, config.init_step_d * 1e-6);
            t_r = std::max(t_r * 0.5, config.init_step_r * 1e-6);
        }

        if (improvement <= config.rel_tol * std::max(1.0, std::abs(current.total()))) {
            if (++stall_count >= 3) {
                result.converged = true;
                break;
            }
        } else {
            stall_count = 0;
        }
    }

    result.depth_index = std::move(d);
    result.intensity = std::move(r);
    return result;
}

SubsampleResult subsample_scan_positions(const ScanPattern& scan, double fraction,
                                         uint64_t seed, const Region& crop) {
    scan.validate();
    if (fraction <= 0.0 || fraction > 1.0)
        throw ConfigError("subsample: fraction must be in (0, 1]");
    if (crop.row < 0 || crop.col < 0 || crop.width <= 0 || crop.height <= 0 ||
        crop.row + crop.height > scan.sensor_height || crop.col + crop.width > scan.sensor_width)
        throw ConfigError("subsample: crop exceeds the sensor");

    const int total = scan.num_positions();
    std::vector<int> order(static_cast<size_t>(total));
    std::iota(order.begin(), order.end(), 0);
    Rng rng(seed);
    for (int i = total - 1; i > 0; --i) {
        const int j = int(rng.uniform_below(uint64_t(i + 1)));
        std::swap(order[size_t(i)], order[size_t(j)]);
    }
    // Taking a prefix of one fixed shuffle makes subsets nested across
    // fractions for the same seed.
    const int take = int(std::ceil(fraction * total));
    SubsampleResult result;
    result.positions.assign(order.begin(), order.begin() + take);
    std::sort(result.positions.begin(), result.positions.end());

    result.observed = Raster<uint8_t>(crop.width, crop.height, 0);
    for (int p : result.positions) {
        auto [cr, cc] = scan.spot_center(p);
        const int reach = scan.spot_px / 2 + 1;
        for (int row = std::max(crop.row, cr - reach);
             row <= std::min(crop.row + crop.height - 1, cr + reach); ++row) {
            for (int col = std::max(crop.col, cc - reach);
                 col <= std::min(crop.col + crop.width - 1, cc + reach); ++col) {
                if (scan.covers(p, row, col))
                    result.observed.at(row - crop.row, col - crop.col) = 1;
            }
        }
    }
    result.pixel_coverage =
        double(count_true(result.observed)) / double(size_t(crop.width) * crop.height);
    return result;
}

}  // namespace glidar
