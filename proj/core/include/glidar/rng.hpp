#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace glidar {

/// SplitMix64 mixing step; used to derive independent stream seeds from a
/// master seed so per-position draws do not depend on iteration order.
inline uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline uint64_t derive_stream_seed(uint64_t master_seed, uint64_t stream_id) {
    return splitmix64(master_seed ^ splitmix64(stream_id + 1));
}

/// Deterministic RNG. mt19937_64 output is fully specified by the standard,
/// and all variate transforms are implemented here rather than with std
/// distributions, so a (seed, stream) pair produces identical values on
/// every platform.
class Rng {
public:
    explicit Rng(uint64_t seed) : engine_(seed) {}
    Rng(uint64_t master_seed, uint64_t stream_id)
        : engine_(derive_stream_seed(master_seed, stream_id)) {}

    uint64_t next_u64() { return engine_(); }

    /// Uniform in [0, 1) with 53-bit resolution.
    double uniform() { return double(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, n).
    uint64_t uniform_below(uint64_t n) {
        uint64_t threshold = (~n + 1) % n;  // 2^64 mod n
        for (;;) {
            uint64_t r = engine_();
            if (r >= threshold) return r % n;
        }
    }

    double normal() {
        double u1 = uniform();
        double u2 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    }

    int binomial(int n, double p);

private:
    std::mt19937_64 engine_;
};

/// Precomputed Binomial(n, p) ready for repeated sampling; setup costs a few
/// lgamma/log calls, each draw is an inversion walk from the mode with
/// expected O(sqrt(np)) steps.
class BinomialDist {
public:
    BinomialDist(int n, double p);

    int draw(Rng& rng) const;

private:
    int n_ = 0;
    double p_ = 0.0;     // success probability actually walked (<= 0.5)
    bool flip_ = false;  // true when the caller's p was > 0.5
    int mode_ = 0;
    double mode_pmf_ = 0.0;
    double odds_ = 0.0;  // p / (1 - p)
    bool degenerate_zero_ = false;
    bool degenerate_n_ = false;
};

}  // namespace glidar
