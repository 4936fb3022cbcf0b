#include "glidar/edge_fit.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "glidar/error.hpp"

namespace glidar {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kSqrtPi = 1.7724538509055160273;
}  // namespace

double erf_model(double k, double d, double r, double h, double b) {
    if (h == 0.0) {
        if (k < d) return b;
        if (k > d) return b + r;
        return b + 0.5 * r;
    }
    return b + 0.5 * r * (1.0 + std::erf((k - d) / h));
}

double arctan_model(double k, double d, double r, double h, double b) {
    if (h == 0.0) {
        if (k < d) return b;
        if (k > d) return b + r;
        return b + 0.5 * r;
    }
    return b + 0.5 * r * (1.0 + (2.0 / kPi) * std::atan((k - d) / h));
}

double edge_model(EdgeFunction fn, double k, double d, double r, double h, double b) {
    return fn == EdgeFunction::Erf ? erf_model(k, d, r, h, b) : arctan_model(k, d, r, h, b);
}

void FitConfig::validate() const {
    if (h < 0.0) throw ConfigError("fit: h must be non-negative");
    if (max_iters <= 0) throw ConfigError("fit: max_iters must be positive");
    if (convergence_tol <= 0.0) throw ConfigError("fit: convergence_tol must be positive");
    if (min_amplitude < 0.0) throw ConfigError("fit: min_amplitude must be non-negative");
    if (min_plateau_samples < 1) throw ConfigError("fit: min_plateau_samples must be >= 1");
}

namespace {

// Rising-edge shape in [0, 1] and its derivative with respect to d.
inline double edge_shape(EdgeFunction fn, double x, double h) {
    if (fn == EdgeFunction::Erf) return 0.5 * (1.0 + std::erf(x / h));
    return 0.5 * (1.0 + (2.0 / kPi) * std::atan(x / h));
}

inline double edge_shape_dderiv(EdgeFunction fn, double x, double h) {
    // derivative of edge_shape(k - d) with respect to d
    if (fn == EdgeFunction::Erf) return -std::exp(-(x / h) * (x / h)) / (h * kSqrtPi);
    return -h / (kPi * (h * h + x * x));
}

double sum_squares(std::span<const float> y, EdgeFunction fn, double d, double r, double h) {
    double ss = 0.0;
    for (size_t k = 0; k < y.size(); ++k) {
        const double e = double(y[k]) - r * edge_shape(fn, double(k) - d, h);
        ss += e * e;
    }
    return ss;
}

/// Plateau level estimate: mean of the top quartile of samples.
double plateau_estimate(std::span<const float> y) {
    std::vector<float> sorted(y.begin(), y.end());
    std::sort(sorted.begin(), sorted.end());
    const size_t q = std::max<size_t>(1, sorted.size() / 4);
    double sum = 0.0;
    for (size_t i = sorted.size() - q; i < sorted.size(); ++i) sum += sorted[i];
    return sum / double(q);
}

/// Exact step-model fit used when h = 0: the edge can sit anywhere between
/// two samples, so candidate positions are the sample midpoints.
PixelEstimate fit_step(std::span<const float> y, const FitConfig& config) {
    const size_t K = y.size();
    std::vector<double> suffix_sum(K + 1, 0.0), suffix_sq(K + 1, 0.0);
    for (size_t k = K; k-- > 0;) {
        suffix_sum[k] = suffix_sum[k + 1] + y[k];
        suffix_sq[k] = suffix_sq[k + 1] + double(y[k]) * y[k];
    }
    const double total_sq = suffix_sq[0];

    PixelEstimate best;
    best.residual_ss = total_sq;  // edge beyond the window: model is all zero
    best.d = double(K);
    best.r = 0.0;
    for (size_t split = 0; split <= K; ++split) {
        const size_t n_above = K - split;
        if (n_above == 0) continue;
        const double r = std::max(0.0, suffix_sum[split] / double(n_above));
        const double ss = (total_sq - suffix_sq[split]) +
                          (suffix_sq[split] - 2.0 * r * suffix_sum[split] + r * r * n_above);
        if (ss < best.residual_ss) {
            best.residual_ss = ss;
            best.d = split == 0 ? -0.5 : double(split) - 0.5;
            best.r = r;
        }
    }
    best.d = std::max(0.0, best.d);
    best.valid = best.r >= config.min_amplitude &&
                 double(K) - best.d >= double(config.min_plateau_samples);
    return best;
}

}  // namespace

PixelEstimate fit_pixel(std::span<const float> profile, const FitConfig& config) {
    config.validate();
    const size_t K = profile.size();
    if (K < 3) throw ConfigError("fit: profile must have at least 3 samples");

    PixelEstimate est;
    double peak = 0.0;
    for (float v : profile) peak = std::max(peak, double(v));
    if (peak <= 0.0) return est;  // no signal at all

    if (config.h == 0.0) return fit_step(profile, config);

    const EdgeFunction fn = config.edge_function;
    const double h = config.h;

    // Initialization: plateau from the top quartile, edge at the first
    // half-plateau crossing.
    const double plateau = plateau_estimate(profile);
    double d = 0.0;
    for (size_t k = 0; k < K; ++k) {
        if (double(profile[k]) >= 0.5 * plateau) {
            d = double(k);
            break;
        }
    }
    double r = std::max(plateau, 1e-12);

    double ss = sum_squares(profile, fn, d, r, h);
    double damping = 1e-3;
    bool converged = false;

    for (int iter = 0; iter < config.max_iters; ++iter) {
        // Gauss-Newton normal equations for the 2-vector (d, r).
        double jtj_dd = 0.0, jtj_dr = 0.0, jtj_rr = 0.0;
        double jte_d = 0.0, jte_r = 0.0;
        for (size_t k = 0; k < K; ++k) {
            const double x = double(k) - d;
            const double g = edge_shape(fn, x, h);
            const double jd = r * edge_shape_dderiv(fn, x, h);
            const double jr = g;
            const double e = double(profile[k]) - r * g;
            jtj_dd += jd * jd;
            jtj_dr += jd * jr;
            jtj_rr += jr * jr;
            jte_d += jd * e;
            jte_r += jr * e;
        }

        bool accepted = false;
        for (int attempt = 0; attempt < 12; ++attempt) {
            const double a = jtj_dd * (1.0 + damping);
            const double c = jtj_rr * (1.0 + damping);
            const double det = a * c - jtj_dr * jtj_dr;
            if (det <= 0.0 || !std::isfinite(det)) {
                damping *= 4.0;
                continue;
            }
            const double delta_d = (c * jte_d - jtj_dr * jte_r) / det;
            const double delta_r = (a * jte_r - jtj_dr * jte_d) / det;
            const double d_new = std::max(0.0, d + delta_d);
            const double r_new = std::max(0.0, r + delta_r);
            const double ss_new = sum_squares(profile, fn, d_new, r_new, h);
            if (ss_new <= ss) {
                const double rel = std::max(std::abs(d_new - d) / std::max(1.0, std::abs(d)),
                                            std::abs(r_new - r) / std::max(1.0, std::abs(r)));
                d = d_new;
                r = r_new;
                ss = ss_new;
                damping = std::max(damping / 3.0, 1e-12);
                accepted = true;
                if (rel < config.convergence_tol) converged = true;
                break;
            }
            damping *= 4.0;
        }
        if (!accepted || converged) {
            converged = converged || !accepted;  // damping exhausted = stationary
            break;
        }
    }

    est.d = d;
    est.r = r;
    est.residual_ss = ss;

    const int plateau_samples = int(std::floor(double(K) - 1.0 - (d + 2.0 * h))) + 1;
    est.valid = r >= config.min_amplitude && plateau_samples >= config.min_plateau_samples;
    return est;
}

FitResult fit_cube(const FloatCube& cleaned, const Raster<uint8_t>* exclude,
                   const FitConfig& config) {
    config.validate();
    if (exclude && !exclude->same_dims(cleaned.width, cleaned.height))
        throw DataError("fit: exclude mask dimensions do not match the cube");
    if (cleaned.num_gates < 3) throw DataError("fit: cube must have at least 3 gates");

    FitResult out;
    out.depth_index = Raster<float>(cleaned.width, cleaned.height, 0.0f);
    out.intensity = Raster<float>(cleaned.width, cleaned.height, 0.0f);
    out.residual_ss = Raster<float>(cleaned.width, cleaned.height, 0.0f);
    out.valid = Raster<uint8_t>(cleaned.width, cleaned.height, 0);

    const size_t plane = size_t(cleaned.width) * cleaned.height;
    std::vector<float> profile(size_t(cleaned.num_gates));
    for (int row = 0; row < cleaned.height; ++row) {
        for (int col = 0; col < cleaned.width; ++col) {
            if (exclude && exclude->at(row, col)) continue;
            const size_t base = size_t(row) * cleaned.width + col;
            for (int k = 0; k < cleaned.num_gates; ++k)
                profile[size_t(k)] = cleaned.values[size_t(k) * plane + base];
            const PixelEstimate est = fit_pixel(profile, config);
            if (!est.valid) continue;
            out.depth_index.at(row, col) = float(est.d);
            out.intensity.at(row, col) = float(est.r);
            out.residual_ss.at(row, col) = float(est.residual_ss);
            out.valid.at(row, col) = 1;
        }
    }
    return out;
}

void apply_edge_correction(Raster<float>& depth_m, const Raster<uint8_t>& valid,
                           const EdgeCorrection& correction) {
    if (!depth_m.same_dims(valid))
        throw DataError("edge correction: depth and validity dims differ");
    if (!correction.offset_map_m.empty() && !correction.offset_map_m.same_dims(depth_m))
        throw DataError("edge correction: offset map dims differ");
    for (int row = 0; row < depth_m.height(); ++row) {
        for (int col = 0; col < depth_m.width(); ++col) {
            if (!valid.at(row, col)) continue;
            double off = correction.constant_m;
            if (!correction.offset_map_m.empty()) off += correction.offset_map_m.at(row, col);
            depth_m.at(row, col) += float(off);
        }
    }
}

EdgeCorrection calibrate_constant_correction(const Raster<float>& fitted_depth_m,
                                             const Raster<uint8_t>& valid,
                                             double known_range_m) {
    if (!fitted_depth_m.same_dims(valid))
        throw DataError("edge correction: depth and validity dims differ");
    double sum = 0.0;
    size_t n = 0;
    for (size_t i = 0; i < fitted_depth_m.size(); ++i) {
        if (!valid[i]) continue;
        sum += double(fitted_depth_m[i]);
        ++n;
    }
    if (n == 0) throw DataError("edge correction: no valid pixels to calibrate from");
    EdgeCorrection corr;
    corr.constant_m = known_range_m - sum / double(n);
    return corr;
}

}  // namespace glidar
