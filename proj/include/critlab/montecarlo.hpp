#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "critlab/engine.hpp"

namespace critlab {

struct EnsembleConfig {
    int n_traj = 1;
    std::uint64_t master_seed = 0;
    StopRule stop;
    Vec x0;
    int n_threads = 1;
};

// Wilson score interval at 95% by default.
struct FreqCI {
    double freq = 0.0;
    double lo = 0.0;
    double hi = 0.0;
};
FreqCI wilson_interval(std::int64_t successes, std::int64_t n, double z = 1.959963984540054);

// Quantiles (nearest-rank) of ||X_check||_1/||X||_1 at the upper-level
// crossing, over divergent trajectories only.
struct DirectionStats {
    int n_divergent = 0;
    double q50 = 0.0;
    double q90 = 0.0;
    double max = 0.0;
};

struct EnsembleReport {
    int n_traj = 0;
    std::uint64_t master_seed = 0;
    std::int64_t extinct = 0, diverged = 0, exhausted = 0;
    FreqCI extinction_freq, divergence_freq, horizon_exhausted_freq;
    DirectionStats direction_stats;       // zeroed when nothing diverged
    std::optional<double> gamma_hat;      // sigma2(x)/x slope (bisexual diagnostics)
    std::vector<TrajectorySummary> summaries; // ordered by trajectory index
};

// n_traj independent trajectories with per-index streams derived from
// (master_seed, index). Classification by stop reason: Absorbed ->
// extinction, HitUpper -> divergence, HorizonExhausted reported separately.
// Byte-identical results for any n_threads.
EnsembleReport run_ensemble(const ProcessModel& model, const EnsembleConfig& cfg);

// Throws NoDivergentTrajectoriesError when no trajectory hit the upper level.
DirectionStats direction_of_divergence(const std::vector<TrajectorySummary>& summaries);

// Through-origin regression of empirical Var(l xi | x) on x at log-spaced
// states (diagnostic for sigma2(x) ~ gamma x).
double estimate_gamma_hat(const ProcessModel& model, const std::vector<double>& states,
                          int n_samples, std::uint64_t seed);

struct SweepRow {
    double param_value = 0.0;
    EnsembleReport report;
};

using ModelFactory = std::function<std::unique_ptr<ProcessModel>(double)>;

// One ensemble per parameter value, rows in input order.
std::vector<SweepRow> phase_sweep(const ModelFactory& make_model,
                                  const std::vector<double>& values, const EnsembleConfig& cfg);

} // namespace critlab
