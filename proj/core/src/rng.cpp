#include "glidar/rng.hpp"

namespace glidar {

BinomialDist::BinomialDist(int n, double p) : n_(n) {
    if (n <= 0 || p <= 0.0) {
        degenerate_zero_ = true;
        return;
    }
    if (p >= 1.0) {
        degenerate_n_ = true;
        return;
    }
    flip_ = p > 0.5;
    p_ = flip_ ? 1.0 - p : p;
    mode_ = int((n + 1) * p_);
    const double log_pm = std::lgamma(double(n) + 1.0) - std::lgamma(double(mode_) + 1.0) -
                          std::lgamma(double(n - mode_) + 1.0) + mode_ * std::log(p_) +
                          (n - mode_) * std::log1p(-p_);
    mode_pmf_ = std::exp(log_pm);
    odds_ = p_ / (1.0 - p_);
}

int BinomialDist::draw(Rng& rng) const {
    if (degenerate_zero_) return 0;
    if (degenerate_n_) return n_;

    // Inversion walking outward from the mode. Outcomes are visited in the
    // fixed order m, m-1, m+1, m-2, m+2, ... and the first one whose
    // cumulative probability covers u is returned.
    const double u = rng.uniform();
    double acc = mode_pmf_;
    int result = mode_;
    if (u > acc) {
        int down_k = mode_;
        int up_k = mode_;
        double down_p = mode_pmf_;
        double up_p = mode_pmf_;
        result = -1;
        while (down_k > 0 || up_k < n_) {
            if (down_k > 0) {
                down_p *= double(down_k) / (double(n_ - down_k + 1) * odds_);
                --down_k;
                acc += down_p;
                if (u <= acc) {
                    result = down_k;
                    break;
                }
            }
            if (up_k < n_) {
                up_p *= double(n_ - up_k) * odds_ / double(up_k + 1);
                ++up_k;
                acc += up_p;
                if (u <= acc) {
                    result = up_k;
                    break;
                }
            }
        }
        if (result < 0) result = mode_;  // rounding left a sliver of tail mass
    }
    return flip_ ? n_ - result : result;
}

int Rng::binomial(int n, double p) { return BinomialDist(n, p).draw(*this); }

}  // namespace glidar
