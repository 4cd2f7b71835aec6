#include "critlab/models.hpp"

#include <cmath>

#include "critlab/errors.hpp"

namespace critlab {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;

double family_count_variance(CountFamily f, double mean) {
    switch (f) {
        case CountFamily::Equidispersed: return mean;
        case CountFamily::Bernoulli: {
            double frac = mean - std::floor(mean);
            return frac * (1.0 - frac);
        }
        case CountFamily::Degenerate: return 0.0;
    }
    return 0.0;
}

// One draw of the sum of n iid per-parent counts with the given mean.
// Equidispersed sums collapse to a single Poisson draw; the Bernoulli family
// is sampled per parent (test-scale populations only).
std::int64_t sample_aggregate(CountFamily f, std::int64_t n, double mean, RandomStream& rng) {
    switch (f) {
        case CountFamily::Equidispersed:
            return rng.next_poisson(static_cast<double>(n) * mean);
        case CountFamily::Bernoulli: {
            std::int64_t base = static_cast<std::int64_t>(std::floor(mean));
            double frac = mean - static_cast<double>(base);
            std::int64_t total = n * base;
            for (std::int64_t i = 0; i < n; ++i)
                if (rng.next_bernoulli(frac)) ++total;
            return total;
        }
        case CountFamily::Degenerate:
            return n * std::llround(mean);
    }
    return 0;
}

std::int64_t as_count(double v, const char* what) {
    if (!(v >= 0.0) || v != std::floor(v))
        throw InvalidConfigError(std::string(what) + ": expected a non-negative integer state");
    return static_cast<std::int64_t>(v);
}

} // namespace

double mating(double females, double males, int r) {
    if (!(females >= 0.0) || !(males >= 0.0))
        throw InvalidConfigError("mating: counts must be >= 0");
    if (r < 1) throw InvalidConfigError("mating: r must be >= 1");
    return std::min(females, static_cast<double>(r) * males);
}

double bisexual_threshold(double alpha) {
    if (!(alpha > 0.0)) throw InvalidConfigError("bisexual_threshold: alpha must be > 0");
    return std::sqrt(alpha / kTwoPi);
}

double bisexual_drift_asymptotic(double beta, double alpha, double x) {
    if (!(alpha > 0.0)) throw InvalidConfigError("bisexual_drift_asymptotic: alpha must be > 0");
    if (!(x > 0.0)) throw InvalidConfigError("bisexual_drift_asymptotic: x must be > 0");
    return (beta - bisexual_threshold(alpha)) * std::sqrt(x);
}

// --- synthetic --------------------------------------------------------------

double PowerProfile::operator()(double t) const {
    return c0 + c1 * std::pow(t, expo);
}

SpectralData SyntheticModel::scalar_spectral() {
    SpectralData s;
    s.matrix = Matrix(1, {1.0});
    s.lambda1 = 1.0;
    s.left = Vec{1.0};
    s.right = Vec{1.0};
    s.primitivity_power = 1;
    return s;
}

SyntheticModel::SyntheticModel(Params p) : spectral_(p.spectral), params_(std::move(p)) {
    if (spectral_.dim() == 0) {
        spectral_ = scalar_spectral();
        params_.spectral = spectral_;
    }
}

Vec SyntheticModel::drift(const Vec& x) const {
    double lx = dot(spectral_.left, x);
    return scaled(spectral_.right, params_.drift_profile(lx));
}

double SyntheticModel::sigma2(const Vec& x) const {
    double lx = dot(spectral_.left, x);
    return std::max(0.0, params_.sigma2_profile(lx));
}

Vec SyntheticModel::next_state(const Vec& x, RandomStream& rng) const {
    Vec next = add(spectral_.matrix.apply(x), drift(x));
    if (params_.noise != NoiseKind::None) {
        double eta = params_.noise == NoiseKind::Normal
                         ? rng.next_normal()
                         : (rng.next_bernoulli(0.5) ? 1.0 : -1.0);
        double sd = std::sqrt(sigma2(x));
        // xi = sd * eta * r, so l xi has variance sigma2 (l r = 1)
        for (int i = 0; i < dim(); ++i) next[i] += sd * eta * spectral_.right[i];
    }
    for (double& v : next) v = std::max(0.0, v);
    return next;
}

bool SyntheticModel::absorbed(const Vec& x) const {
    return dot(spectral_.left, x) <= params_.absorb_below;
}

// --- bisexual GW --------------------------------------------------------------

BisexualModel::BisexualModel(Params p) : spectral_(SyntheticModel::scalar_spectral()), params_(p) {
    if (params_.r_mate < 1) throw InvalidConfigError("bisexual: r_mate must be >= 1");
    if (!(params_.eta > 0.0)) throw InvalidConfigError("bisexual: eta must be > 0");
}

double BisexualModel::couple_mean(double x) const {
    if (params_.mean_rho_override) return *params_.mean_rho_override;
    if (!(x > 0.0)) return 0.0;
    return std::max(0.0, 1.0 + params_.beta / std::sqrt(x));
}

double BisexualModel::mean_tau(double x) const {
    if (params_.mean_tau_override) return *params_.mean_tau_override;
    return couple_mean(x) / static_cast<double>(params_.r_mate);
}

double BisexualModel::v_of(double x) const {
    const double r = static_cast<double>(params_.r_mate);
    return family_count_variance(params_.family, couple_mean(x)) +
           r * r * family_count_variance(params_.family, mean_tau(x));
}

double BisexualModel::alpha() const {
    const double r = static_cast<double>(params_.r_mate);
    double mr = params_.mean_rho_override ? *params_.mean_rho_override : 1.0;
    double mt = params_.mean_tau_override ? *params_.mean_tau_override : 1.0 / r;
    return family_count_variance(params_.family, mr) +
           r * r * family_count_variance(params_.family, mt);
}

AggregateCountLaw BisexualModel::rho_law(std::int64_t x) const {
    return {params_.family, x, couple_mean(static_cast<double>(x))};
}

AggregateCountLaw BisexualModel::tau_law(std::int64_t x) const {
    return {params_.family, x, mean_tau(static_cast<double>(x))};
}

Vec BisexualModel::drift(const Vec& x) const {
    std::int64_t n = as_count(x.at(0), "bisexual drift");
    if (n == 0) return Vec{0.0};
    MinMoments mm = min_moments(rho_law(n), params_.r_mate, tau_law(n));
    return Vec{mm.mean - static_cast<double>(n)};
}

double BisexualModel::sigma2(const Vec& x) const {
    std::int64_t n = as_count(x.at(0), "bisexual sigma2");
    if (n == 0) return 0.0;
    return min_moments(rho_law(n), params_.r_mate, tau_law(n)).variance();
}

std::int64_t BisexualModel::sample_next_count(std::int64_t x, RandomStream& rng) const {
    if (x == 0) return 0;
    double xd = static_cast<double>(x);
    std::int64_t females = sample_aggregate(params_.family, x, couple_mean(xd), rng);
    std::int64_t males = sample_aggregate(params_.family, x, mean_tau(xd), rng);
    return std::min(females, static_cast<std::int64_t>(params_.r_mate) * males);
}

Vec BisexualModel::next_state(const Vec& x, RandomStream& rng) const {
    std::int64_t n = as_count(x.at(0), "bisexual step");
    return Vec{static_cast<double>(sample_next_count(n, rng))};
}

bool BisexualModel::absorbed(const Vec& x) const {
    return x.at(0) == 0.0;
}

// --- multitype GW -------------------------------------------------------------

MultitypeModel::MultitypeModel(const NonNegativeMatrix& m, Params p)
    : spectral_(perron_frobenius(m)), params_(p) {
    if (params_.rescale)
        spectral_ = rescale_to_critical(spectral_);
    assert_critical(spectral_, params_.tol_crit);
    if (!(params_.q > 0.0)) throw InvalidConfigError("multitype: q must be > 0");
    if (params_.beta < 0.0) throw InvalidConfigError("multitype: beta must be >= 0");
}

MultitypeModel::MultitypeModel(SpectralData s, Params p) : spectral_(std::move(s)), params_(p) {
    assert_critical(spectral_, params_.tol_crit);
    if (!(params_.q > 0.0)) throw InvalidConfigError("multitype: q must be > 0");
    if (params_.beta < 0.0) throw InvalidConfigError("multitype: beta must be >= 0");
}

Matrix MultitypeModel::mean_matrix(const Vec& x) const {
    double lx = dot(spectral_.left, x);
    if (!(lx > 0.0)) throw InvalidConfigError("multitype mean_matrix: l x must be > 0");
    const int d = dim();
    double scale = params_.beta / std::pow(lx, params_.q);
    Matrix e = spectral_.matrix;
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) e(i, j) += scale * spectral_.right[i] * spectral_.left[j];
    return e;
}

Vec MultitypeModel::drift(const Vec& x) const {
    // (E_x - M) x = beta (l x)^(1-q) r; componentwise >= 0
    double lx = dot(spectral_.left, x);
    if (!(lx > 0.0)) return Vec(dim(), 0.0);
    return scaled(spectral_.right, params_.beta * std::pow(lx, 1.0 - params_.q));
}

double MultitypeModel::sigma2(const Vec& x) const {
    // l Gamma_x l^T with Gamma_x = sum_j Cov_x(zeta_j) x_j; diagonal
    // covariances for independent per-type counts.
    double lx = dot(spectral_.left, x);
    if (!(lx > 0.0)) return 0.0;
    Matrix e = mean_matrix(x);
    const int d = dim();
    double s2 = 0.0;
    for (int k = 0; k < d; ++k) {
        double gkk = 0.0;
        for (int j = 0; j < d; ++j)
            gkk += family_count_variance(params_.family, e(k, j)) * x[j];
        s2 += spectral_.left[k] * spectral_.left[k] * gkk;
    }
    return s2;
}

double MultitypeModel::sigma2_bar() const {
    const int d = dim();
    double s = 0.0;
    for (int k = 0; k < d; ++k)
        for (int j = 0; j < d; ++j)
            s += spectral_.left[k] * spectral_.left[k] * spectral_.matrix(k, j) *
                 spectral_.right[j];
    return s;
}

Vec MultitypeModel::next_state(const Vec& x, RandomStream& rng) const {
    const int d = dim();
    for (int j = 0; j < d; ++j) as_count(x[j], "multitype step");
    double lx = dot(spectral_.left, x);
    if (!(lx > 0.0)) return Vec(d, 0.0);
    Matrix e = mean_matrix(x);
    Vec next(d, 0.0);
    if (params_.family == CountFamily::Equidispersed) {
        // Sum over parents and types of independent Poisson counts: one
        // Poisson draw per child type with mean (E_x x)_k.
        for (int k = 0; k < d; ++k) {
            double mean_k = 0.0;
            for (int j = 0; j < d; ++j) mean_k += e(k, j) * x[j];
            next[k] = static_cast<double>(rng.next_poisson(mean_k));
        }
        return next;
    }
    for (int j = 0; j < d; ++j) {
        std::int64_t parents = static_cast<std::int64_t>(x[j]);
        for (int k = 0; k < d; ++k)
            next[k] += static_cast<double>(
                sample_aggregate(params_.family, parents, e(k, j), rng));
    }
    return next;
}

bool MultitypeModel::absorbed(const Vec& x) const {
    for (double v : x)
        if (v != 0.0) return false;
    return true;
}

} // namespace critlab
