#include "critlab/rng.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace critlab {

namespace {
constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;
constexpr double kTwoPi = 6.283185307179586476925286766559;
} // namespace

std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

RandomStream::RandomStream(std::uint64_t master_seed, std::uint64_t stream_id)
    : state_(mix64(mix64(master_seed + kGamma) ^ mix64(stream_id + 0x5851F42D4C957F2DULL))) {}

std::uint64_t RandomStream::next_u64() {
    state_ += kGamma;
    return mix64(state_);
}

double RandomStream::next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RandomStream::next_normal() {
    if (has_cached_normal_) {
        has_cached_normal_ = false;
        return cached_normal_;
    }
    // u1 in (0,1] so log is finite.
    double u1 = 1.0 - next_double();
    double u2 = next_double();
    double rad = std::sqrt(-2.0 * std::log(u1));
    cached_normal_ = rad * std::sin(kTwoPi * u2);
    has_cached_normal_ = true;
    return rad * std::cos(kTwoPi * u2);
}

bool RandomStream::next_bernoulli(double p) {
    return next_double() < p;
}

std::int64_t RandomStream::next_poisson(double mean) {
    if (!(mean >= 0.0))
        throw std::invalid_argument("next_poisson: mean must be >= 0");
    if (mean == 0.0) return 0;

    if (mean < 10.0) {
        // Sequential inversion.
        double p = std::exp(-mean);
        double cum = p;
        double u = next_double();
        std::int64_t k = 0;
        while (u > cum) {
            ++k;
            p *= mean / static_cast<double>(k);
            cum += p;
            if (k > 2000) break; // cumulative rounding guard
        }
        return k;
    }

    // PTRS (Hormann 1993), exact for mean >= 10.
    const double b = 0.931 + 2.53 * std::sqrt(mean);
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double v_r = 0.9277 - 3.6224 / (b - 2.0);
    const double log_mean = std::log(mean);

    for (;;) {
        double u = next_double() - 0.5;
        double v = next_double();
        double us = 0.5 - std::abs(u);
        double kf = std::floor((2.0 * a / us + b) * u + mean + 0.43);
        if (us >= 0.07 && v <= v_r)
            return static_cast<std::int64_t>(kf);
        if (kf < 0.0 || (us < 0.013 && v > us))
            continue;
        std::int64_t k = static_cast<std::int64_t>(kf);
        double lhs = std::log(v * inv_alpha / (a / (us * us) + b));
        double rhs = kf * log_mean - mean - log_factorial(k);
        if (lhs <= rhs)
            return k;
    }
}

double log_factorial(std::int64_t k) {
    if (k < 0)
        throw std::invalid_argument("log_factorial: negative argument");
    static const std::array<double, 1024> table = [] {
        std::array<double, 1024> t{};
        t[0] = 0.0;
        for (std::size_t i = 1; i < t.size(); ++i)
            t[i] = t[i - 1] + std::log(static_cast<double>(i));
        return t;
    }();
    if (k < static_cast<std::int64_t>(table.size()))
        return table[static_cast<std::size_t>(k)];
    // Stirling series; for k >= 1024 the k^-7 term is < 1e-22.
    const double x = static_cast<double>(k) + 1.0;
    const double inv = 1.0 / x;
    const double inv2 = inv * inv;
    return (x - 0.5) * std::log(x) - x + 0.91893853320467274178032973640562 // log(sqrt(2*pi))
           + inv * (1.0 / 12.0 + inv2 * (-1.0 / 360.0 + inv2 * (1.0 / 1260.0 - inv2 / 1680.0)));
}

} // namespace critlab
