#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "critlab/linalg.hpp"
#include "critlab/rng.hpp"
#include "critlab/spectral.hpp"

namespace critlab {

// Components above this value are treated as numeric overflow; keeps integer
// offspring counts exactly representable in doubles.
constexpr double kOverflowGuard = 1e15;

// Process contract: X_{n+1} = M X_n + g(X_n) + xi_n with E[xi | X_n] = 0 and
// E[(l xi)^2 | X_n] = sigma2(X_n). Integer-lattice models implement
// next_state by direct offspring sampling; the identity above then holds in
// distribution with g(x) = E_x[X_1] - M x.
//
// Immutable after construction; safe to share across threads. Each
// trajectory owns its RandomStream.
class ProcessModel {
  public:
    virtual ~ProcessModel() = default;

    virtual int dim() const = 0;
    virtual const SpectralData& spectral() const = 0;
    virtual Vec drift(const Vec& x) const = 0;     // g(x), exact conditional mean residual
    virtual double sigma2(const Vec& x) const = 0; // Var(l xi | x)
    virtual Vec next_state(const Vec& x, RandomStream& rng) const = 0;
    virtual bool absorbed(const Vec& x) const = 0;

    // (A2)/(A2*) parameters p = 2 + delta and c for moment audits.
    virtual double moment_delta() const { return 1.0; }
    virtual double moment_const() const { return 8.0; }

    virtual std::string name() const = 0;
};

enum class StopReason { Absorbed, HitUpper, HorizonExhausted };

const char* stop_reason_name(StopReason r);

// Numerical surrogate for the recurrence/transience dichotomy: divergence is
// recorded when l X reaches upper_level before absorption.
struct StopRule {
    std::int64_t horizon = 1000000;
    double upper_level = 1e6;
};

StopRule default_stop_rule(const ProcessModel& model, const Vec& x0);

struct Trajectory {
    std::vector<Vec> states;
    std::vector<double> ell_x;       // l X_n per step
    std::vector<double> check_ratio; // ||X_check||_1 / ||X||_1, 0 at X = 0
    StopReason stop_reason = StopReason::HorizonExhausted;
};

// Lean per-trajectory record for ensembles (no state storage).
struct TrajectorySummary {
    StopReason stop_reason = StopReason::HorizonExhausted;
    std::int64_t steps = 0;
    double final_ell_x = 0.0;
    double check_ratio_at_stop = 0.0;
};

// One transition; validates x >= 0 and applies the overflow guard.
Vec step(const ProcessModel& model, const Vec& x, RandomStream& rng);

// Applies step until the rule fires. Deterministic given (model, x0, stop,
// seed): the stream is RandomStream(seed, stream_id).
Trajectory simulate(const ProcessModel& model, const Vec& x0, const StopRule& stop,
                    std::uint64_t seed, std::uint64_t stream_id = 0);

TrajectorySummary simulate_summary(const ProcessModel& model, const Vec& x0,
                                   const StopRule& stop, std::uint64_t seed,
                                   std::uint64_t stream_id = 0);

struct MomentEstimates {
    Vec mean_vec;        // empirical E[xi] componentwise
    Vec mean_se;         // standard error per component
    double var_ell_xi = 0.0;
    double var_ell_xi_se = 0.0;
    double abs_p_moment_of_norm = 0.0; // E[ ||xi||_1^p ]
    double abs_p_moment_se = 0.0;
    int n_samples = 0;
    double p = 0.0;
};

// Samples n one-step noises xi = X_1 - (M x + g(x)) at fixed x.
MomentEstimates noise_probe(const ProcessModel& model, const Vec& x, int n_samples, double p,
                            std::uint64_t seed);

} // namespace critlab
