#include "critlab/countlaw.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "critlab/rng.hpp"

namespace critlab {

namespace {

constexpr double kZ = 14.0; // window half-width in standard deviations

std::vector<double> poisson_pmf_window(double lambda, std::int64_t lo, std::int64_t hi) {
    std::vector<double> pmf;
    pmf.reserve(static_cast<std::size_t>(hi - lo + 1));
    double logp = static_cast<double>(lo) * std::log(lambda) - lambda - log_factorial(lo);
    double p = std::exp(logp);
    pmf.push_back(p);
    for (std::int64_t k = lo + 1; k <= hi; ++k) {
        p *= lambda / static_cast<double>(k);
        pmf.push_back(p);
    }
    return pmf;
}

std::vector<double> binomial_pmf_window(std::int64_t n, double f, std::int64_t lo,
                                        std::int64_t hi) {
    std::vector<double> pmf;
    pmf.reserve(static_cast<std::size_t>(hi - lo + 1));
    double logp = log_factorial(n) - log_factorial(lo) - log_factorial(n - lo) +
                  static_cast<double>(lo) * std::log(f) +
                  static_cast<double>(n - lo) * std::log1p(-f);
    double p = std::exp(logp);
    pmf.push_back(p);
    const double odds = f / (1.0 - f);
    for (std::int64_t k = lo + 1; k <= hi; ++k) {
        p *= odds * static_cast<double>(n - k + 1) / static_cast<double>(k);
        pmf.push_back(p);
    }
    return pmf;
}

} // namespace

const char* family_name(CountFamily f) {
    switch (f) {
        case CountFamily::Equidispersed: return "equidispersed";
        case CountFamily::Bernoulli: return "bernoulli";
        case CountFamily::Degenerate: return "degenerate";
    }
    return "?";
}

double AggregateCountLaw::mean() const {
    switch (family) {
        case CountFamily::Equidispersed:
        case CountFamily::Bernoulli:
            return static_cast<double>(n_parents) * per_mean;
        case CountFamily::Degenerate:
            return static_cast<double>(n_parents) *
                   static_cast<double>(std::llround(per_mean));
    }
    return 0.0;
}

double AggregateCountLaw::variance() const {
    switch (family) {
        case CountFamily::Equidispersed:
            return static_cast<double>(n_parents) * per_mean;
        case CountFamily::Bernoulli: {
            double f = per_mean - std::floor(per_mean);
            return static_cast<double>(n_parents) * f * (1.0 - f);
        }
        case CountFamily::Degenerate:
            return 0.0;
    }
    return 0.0;
}

// Suffix survival from a pmf window: S(k) = sum_{j > k} pmf(j), accumulated
// right-to-left so the small right tail carries no cancellation. Mass beyond
// the window is below the kZ-sigma tail bound.
SurvivalWindow SurvivalWindow::from_pmf(std::int64_t lo, const std::vector<double>& pmf) {
    std::vector<double> surv(pmf.size(), 0.0);
    double acc = 0.0;
    for (std::size_t i = pmf.size(); i-- > 1;) {
        acc += pmf[i];
        surv[i - 1] = acc;
    }
    return SurvivalWindow(lo, std::move(surv));
}

SurvivalWindow SurvivalWindow::build(const AggregateCountLaw& law) {
    switch (law.family) {
        case CountFamily::Degenerate: {
            std::int64_t total = law.n_parents * std::llround(law.per_mean);
            return SurvivalWindow(total, {}); // S = 1 below total, 0 at/above
        }
        case CountFamily::Equidispersed: {
            double lambda = static_cast<double>(law.n_parents) * law.per_mean;
            if (lambda <= 0.0) return SurvivalWindow(0, {});
            double sd = std::sqrt(lambda);
            std::int64_t lo = std::max<std::int64_t>(
                0, static_cast<std::int64_t>(std::floor(lambda - kZ * sd - 5.0)));
            std::int64_t hi = static_cast<std::int64_t>(std::ceil(lambda + kZ * sd + 5.0));
            return from_pmf(lo, poisson_pmf_window(lambda, lo, hi));
        }
        case CountFamily::Bernoulli: {
            std::int64_t base = static_cast<std::int64_t>(std::floor(law.per_mean));
            double f = law.per_mean - static_cast<double>(base);
            std::int64_t offset = law.n_parents * base;
            if (f <= 0.0 || law.n_parents == 0) return SurvivalWindow(offset, {});
            double nf = static_cast<double>(law.n_parents) * f;
            double sd = std::sqrt(nf * (1.0 - f));
            std::int64_t lo = std::max<std::int64_t>(
                0, static_cast<std::int64_t>(std::floor(nf - kZ * sd - 5.0)));
            std::int64_t hi = std::min<std::int64_t>(
                law.n_parents, static_cast<std::int64_t>(std::ceil(nf + kZ * sd + 5.0)));
            SurvivalWindow inner = from_pmf(lo, binomial_pmf_window(law.n_parents, f, lo, hi));
            inner.first_ += offset; // shift onto the total's lattice
            return inner;
        }
    }
    throw std::logic_error("unreachable count family");
}

MinMoments min_moments(const AggregateCountLaw& a, int r, const AggregateCountLaw& b) {
    if (r < 1) throw std::invalid_argument("min_moments: r must be >= 1");
    SurvivalWindow wa = SurvivalWindow::build(a);
    SurvivalWindow wb = SurvivalWindow::build(b);

    // P(min(A, rB) > k) = P(A > k) P(B > floor(k/r)).
    const std::int64_t rb_first = static_cast<std::int64_t>(r) * wb.first();
    const std::int64_t rb_end = static_cast<std::int64_t>(r) * wb.end();
    const std::int64_t k0 = std::min(wa.first(), rb_first); // below: product = 1
    const std::int64_t k1 = std::min(wa.end(), rb_end);     // at/above: product = 0

    long double m1 = static_cast<long double>(k0);
    long double m2 = static_cast<long double>(k0) * static_cast<long double>(k0);
    for (std::int64_t k = k0; k < k1; ++k) {
        double s = wa.survival(k) * wb.survival(k / r);
        m1 += s;
        m2 += (2.0L * static_cast<long double>(k) + 1.0L) * s;
    }
    MinMoments out;
    out.mean = static_cast<double>(m1);
    out.second = static_cast<double>(m2);
    return out;
}

} // namespace critlab
