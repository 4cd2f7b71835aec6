#pragma once

#include <memory>
#include <optional>
#include <string>

#include "critlab/countlaw.hpp"
#include "critlab/engine.hpp"

namespace critlab {

// --- free operations -------------------------------------------------------

// Mating function L(f, m) = min(f, r m); zero if either argument is zero.
double mating(double females, double males, int r);

// Asymptotic one-step drift (beta - sqrt(alpha/2pi)) sqrt(x) of the balanced
// bisexual process with couple mean 1 + beta/sqrt(x) and Var(rho - r tau) ->
// alpha.
double bisexual_drift_asymptotic(double beta, double alpha, double x);

// Phase boundary beta* = sqrt(alpha / 2pi): extinction a.s. below, positive
// divergence probability above.
double bisexual_threshold(double alpha);

// --- synthetic -------------------------------------------------------------

// c0 + c1 * t^expo, evaluated on t = l x.
struct PowerProfile {
    double c0 = 0.0;
    double c1 = 0.0;
    double expo = 0.0;
    double operator()(double t) const;
};

enum class NoiseKind { None, Normal, Rademacher };

// User-specified process: next = M x + gp(l x) r + sigma(x) eta r, clamped to
// the orthant. Declared drift/sigma2 are the profiles; they match the
// sampled law wherever clamping is inactive.
class SyntheticModel final : public ProcessModel {
  public:
    struct Params {
        SpectralData spectral;        // defaults to the 1x1 identity
        PowerProfile drift_profile;   // g(x) = drift_profile(l x) * r
        PowerProfile sigma2_profile;  // sigma2(x) = max(0, sigma2_profile(l x))
        NoiseKind noise = NoiseKind::None;
        double absorb_below = 0.0;    // absorbed iff l x <= absorb_below
    };

    explicit SyntheticModel(Params p);

    int dim() const override { return spectral_.dim(); }
    const SpectralData& spectral() const override { return spectral_; }
    Vec drift(const Vec& x) const override;
    double sigma2(const Vec& x) const override;
    Vec next_state(const Vec& x, RandomStream& rng) const override;
    bool absorbed(const Vec& x) const override;
    std::string name() const override { return "synthetic"; }

    static SpectralData scalar_spectral();

  private:
    SpectralData spectral_;
    Params params_;
};

// --- bisexual GW ------------------------------------------------------------

// Population size dependent bisexual Galton-Watson process with mating
// min(F, r M), tracked by the couples count X_n (d = 1). Balanced family:
// E[rho | x] = e(x) = 1 + beta/sqrt(x) (clamped at 0), E[tau | x] = e(x)/r.
// drift/sigma2 are the exact conditional moments of min(sum rho, r sum tau),
// evaluated from the aggregate count laws (no Monte Carlo involved).
class BisexualModel final : public ProcessModel {
  public:
    struct Params {
        int r_mate = 1;
        double beta = 0.0;
        CountFamily family = CountFamily::Equidispersed;
        double eta = 1.0; // (moment) exponent; p up to 2 + eta is audited
        // Constant per-couple means for mechanism tests; when set they
        // replace e(x) and e(x)/r (the pair need not be balanced).
        std::optional<double> mean_rho_override;
        std::optional<double> mean_tau_override;
    };

    explicit BisexualModel(Params p);

    int dim() const override { return 1; }
    const SpectralData& spectral() const override { return spectral_; }
    Vec drift(const Vec& x) const override;
    double sigma2(const Vec& x) const override;
    Vec next_state(const Vec& x, RandomStream& rng) const override;
    bool absorbed(const Vec& x) const override;
    double moment_delta() const override { return params_.eta; }
    std::string name() const override { return "bisexual"; }

    int r_mate() const { return params_.r_mate; }
    double beta() const { return params_.beta; }

    double couple_mean(double x) const; // e(x)
    double mean_tau(double x) const;
    double v_of(double x) const; // Var(rho - r tau | x)
    double alpha() const;        // limit of v(x)

    // One couples-count transition as a plain integer (d = 1 fast path).
    std::int64_t sample_next_count(std::int64_t x, RandomStream& rng) const;

  private:
    AggregateCountLaw rho_law(std::int64_t x) const;
    AggregateCountLaw tau_law(std::int64_t x) const;

    SpectralData spectral_;
    Params params_;
};

// --- multitype GW -----------------------------------------------------------

// Population size dependent multitype Galton-Watson process with mean matrix
// E_x = M + (beta / (l x)^q) r l and per-type independent offspring counts
// (diagonal covariances, so the trace condition holds for free).
class MultitypeModel final : public ProcessModel {
  public:
    struct Params {
        double beta = 0.0;
        double q = 1.0;
        CountFamily family = CountFamily::Equidispersed;
        double eta = 1.0;
        double tol_crit = 1e-9;
        bool rescale = false;
    };

    MultitypeModel(const NonNegativeMatrix& m, Params p);
    MultitypeModel(SpectralData s, Params p); // s must already be critical

    int dim() const override { return spectral_.dim(); }
    const SpectralData& spectral() const override { return spectral_; }
    Vec drift(const Vec& x) const override;
    double sigma2(const Vec& x) const override;
    Vec next_state(const Vec& x, RandomStream& rng) const override;
    bool absorbed(const Vec& x) const override;
    double moment_delta() const override { return params_.eta; }
    std::string name() const override { return "multitype"; }

    double beta() const { return params_.beta; }

    // E_x = M + (beta/(l x)^q) r l; requires l x > 0.
    Matrix mean_matrix(const Vec& x) const;

    // Limit of sigma2(x)/(l x) along the ray (unit-dispersion family):
    // sum_{j,k} l_k^2 M_kj r_j.
    double sigma2_bar() const;

  private:
    SpectralData spectral_;
    Params params_;
};

} // namespace critlab
