#include "critlab/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "critlab/errors.hpp"
#include "critlab/models.hpp"

namespace critlab {

FreqCI wilson_interval(std::int64_t successes, std::int64_t n, double z) {
    FreqCI ci;
    if (n <= 0) return ci;
    double p = static_cast<double>(successes) / static_cast<double>(n);
    double nn = static_cast<double>(n);
    double z2 = z * z;
    double denom = 1.0 + z2 / nn;
    double center = (p + z2 / (2.0 * nn)) / denom;
    double half = z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / denom;
    ci.freq = p;
    ci.lo = successes == 0 ? 0.0 : std::max(0.0, center - half);
    ci.hi = successes == n ? 1.0 : std::min(1.0, center + half);
    return ci;
}

namespace {

double nearest_rank(const std::vector<double>& sorted, double q) {
    if (sorted.empty()) return 0.0;
    std::size_t idx = static_cast<std::size_t>(q * static_cast<double>(sorted.size()));
    idx = std::min(idx, sorted.size() - 1);
    return sorted[idx];
}

} // namespace

DirectionStats direction_of_divergence(const std::vector<TrajectorySummary>& summaries) {
    std::vector<double> ratios;
    for (const TrajectorySummary& s : summaries)
        if (s.stop_reason == StopReason::HitUpper) ratios.push_back(s.check_ratio_at_stop);
    if (ratios.empty())
        throw NoDivergentTrajectoriesError("direction_of_divergence: no trajectory hit the upper level");
    std::sort(ratios.begin(), ratios.end());
    DirectionStats d;
    d.n_divergent = static_cast<int>(ratios.size());
    d.q50 = nearest_rank(ratios, 0.5);
    d.q90 = nearest_rank(ratios, 0.9);
    d.max = ratios.back();
    return d;
}

double estimate_gamma_hat(const ProcessModel& model, const std::vector<double>& states,
                          int n_samples, std::uint64_t seed) {
    // slope of Var(l xi | x) on x through the origin
    double sxy = 0.0, sxx = 0.0;
    int idx = 0;
    for (double x : states) {
        MomentEstimates est =
            noise_probe(model, Vec{x}, n_samples, 2.0 + model.moment_delta(),
                        mix64(seed + 0x67616d6dULL + static_cast<std::uint64_t>(idx++)));
        sxy += est.var_ell_xi * x;
        sxx += x * x;
    }
    if (!(sxx > 0.0)) throw InvalidConfigError("estimate_gamma_hat: need nonzero states");
    return sxy / sxx;
}

EnsembleReport run_ensemble(const ProcessModel& model, const EnsembleConfig& cfg) {
    if (cfg.n_traj < 1) throw InvalidConfigError("ensemble: n_traj must be >= 1");
    if (static_cast<int>(cfg.x0.size()) != model.dim())
        throw DimensionMismatchError("ensemble: x0 size != model dim");

    const int n = cfg.n_traj;
    std::vector<TrajectorySummary> summaries(static_cast<std::size_t>(n));

    int n_threads = std::max(1, cfg.n_threads);
    if (n_threads == 1) {
        for (int i = 0; i < n; ++i)
            summaries[static_cast<std::size_t>(i)] = simulate_summary(
                model, cfg.x0, cfg.stop, cfg.master_seed, static_cast<std::uint64_t>(i));
    } else {
        // Work queue of indices; results land in slots, reduction stays
        // index-ordered and therefore schedule-independent.
        std::atomic<int> next{0};
        std::exception_ptr first_error;
        std::mutex err_mutex;
        auto worker = [&]() {
            for (;;) {
                int i = next.fetch_add(1);
                if (i >= n) return;
                try {
                    summaries[static_cast<std::size_t>(i)] =
                        simulate_summary(model, cfg.x0, cfg.stop, cfg.master_seed,
                                         static_cast<std::uint64_t>(i));
                } catch (...) {
                    std::lock_guard<std::mutex> lock(err_mutex);
                    if (!first_error) first_error = std::current_exception();
                    return;
                }
            }
        };
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(n_threads));
        for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
        if (first_error) std::rethrow_exception(first_error);
    }

    EnsembleReport rep;
    rep.n_traj = n;
    rep.master_seed = cfg.master_seed;
    for (const TrajectorySummary& s : summaries) {
        switch (s.stop_reason) {
            case StopReason::Absorbed: ++rep.extinct; break;
            case StopReason::HitUpper: ++rep.diverged; break;
            case StopReason::HorizonExhausted: ++rep.exhausted; break;
        }
    }
    rep.extinction_freq = wilson_interval(rep.extinct, n);
    rep.divergence_freq = wilson_interval(rep.diverged, n);
    rep.horizon_exhausted_freq = wilson_interval(rep.exhausted, n);
    if (rep.diverged > 0) rep.direction_stats = direction_of_divergence(summaries);

    if (dynamic_cast<const BisexualModel*>(&model) != nullptr) {
        std::vector<double> probe_states = {100.0, 1000.0, 10000.0};
        rep.gamma_hat =
            estimate_gamma_hat(model, probe_states, 2000, mix64(cfg.master_seed ^ 0x676d68ULL));
    }
    rep.summaries = std::move(summaries);
    return rep;
}

std::vector<SweepRow> phase_sweep(const ModelFactory& make_model,
                                  const std::vector<double>& values,
                                  const EnsembleConfig& cfg) {
    for (double v : values)
        if (!std::isfinite(v)) throw InvalidConfigError("phase_sweep: values must be finite");
    std::vector<SweepRow> rows;
    rows.reserve(values.size());
    for (double v : values) {
        std::unique_ptr<ProcessModel> model = make_model(v);
        SweepRow row;
        row.param_value = v;
        row.report = run_ensemble(*model, cfg);
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace critlab
