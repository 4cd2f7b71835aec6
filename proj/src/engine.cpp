#include "critlab/engine.hpp"

#include <algorithm>
#include <cmath>

#include "critlab/errors.hpp"

namespace critlab {

const char* stop_reason_name(StopReason r) {
    switch (r) {
        case StopReason::Absorbed: return "absorbed";
        case StopReason::HitUpper: return "hit_upper";
        case StopReason::HorizonExhausted: return "horizon_exhausted";
    }
    return "?";
}

StopRule default_stop_rule(const ProcessModel& model, const Vec& x0) {
    StopRule s;
    s.upper_level = 1e6 * std::max(1.0, dot(model.spectral().left, x0));
    return s;
}

Vec step(const ProcessModel& model, const Vec& x, RandomStream& rng) {
    if (static_cast<int>(x.size()) != model.dim())
        throw DimensionMismatchError("step: state size != model dim");
    for (double v : x)
        if (!(v >= 0.0))
            throw InvalidConfigError("step: state must be componentwise >= 0");
    Vec next = model.next_state(x, rng);
    for (double v : next)
        if (!(v <= kOverflowGuard) || !std::isfinite(v))
            throw NumericOverflowError(model.name() + ": state component exceeded overflow guard");
    return next;
}

namespace {

double check_ratio_of(const Vec& x, const SpectralData& s) {
    double nx = l1_norm(x);
    if (nx == 0.0) return 0.0;
    Decomposition d = decompose(x, s);
    return l1_norm(d.check) / nx;
}

// Shared stepping loop; Recorder sees every state.
template <typename Recorder>
StopReason run_path(const ProcessModel& model, const Vec& x0, const StopRule& stop,
                    RandomStream& rng, Recorder&& record) {
    Vec x = x0;
    const Vec& ell = model.spectral().left;
    for (std::int64_t n = 0;; ++n) {
        double lx = dot(ell, x);
        record(x, lx);
        if (model.absorbed(x)) return StopReason::Absorbed;
        if (lx >= stop.upper_level) return StopReason::HitUpper;
        if (n >= stop.horizon) return StopReason::HorizonExhausted;
        x = step(model, x, rng);
    }
}

} // namespace

Trajectory simulate(const ProcessModel& model, const Vec& x0, const StopRule& stop,
                    std::uint64_t seed, std::uint64_t stream_id) {
    if (stop.horizon < 1) throw InvalidConfigError("StopRule: horizon must be >= 1");
    if (!(stop.upper_level > 0.0)) throw InvalidConfigError("StopRule: upper_level must be > 0");

    RandomStream rng(seed, stream_id);
    Trajectory t;
    const SpectralData& s = model.spectral();
    t.stop_reason = run_path(model, x0, stop, rng, [&](const Vec& x, double lx) {
        t.states.push_back(x);
        t.ell_x.push_back(lx);
        t.check_ratio.push_back(check_ratio_of(x, s));
    });
    return t;
}

TrajectorySummary simulate_summary(const ProcessModel& model, const Vec& x0,
                                   const StopRule& stop, std::uint64_t seed,
                                   std::uint64_t stream_id) {
    if (stop.horizon < 1) throw InvalidConfigError("StopRule: horizon must be >= 1");
    if (!(stop.upper_level > 0.0)) throw InvalidConfigError("StopRule: upper_level must be > 0");

    RandomStream rng(seed, stream_id);
    TrajectorySummary sum;
    const SpectralData& s = model.spectral();
    std::int64_t count = 0;
    Vec last;
    sum.stop_reason = run_path(model, x0, stop, rng, [&](const Vec& x, double lx) {
        ++count;
        sum.final_ell_x = lx;
        last = x;
    });
    sum.steps = count - 1;
    sum.check_ratio_at_stop = check_ratio_of(last, s);
    return sum;
}

MomentEstimates noise_probe(const ProcessModel& model, const Vec& x, int n_samples, double p,
                            std::uint64_t seed) {
    if (n_samples < 100) throw InvalidConfigError("noise_probe: n_samples must be >= 100");
    const int d = model.dim();
    const SpectralData& s = model.spectral();

    // xi = X_1 - (M x + g(x))
    Vec mean_next = add(s.matrix.apply(x), model.drift(x));

    RandomStream rng(seed, /*stream_id=*/0x70726f6265ULL); // probes get their own stream tag
    std::vector<double> ell_xi(n_samples), norm_p(n_samples);
    Vec sum(d, 0.0), sumsq(d, 0.0);
    for (int i = 0; i < n_samples; ++i) {
        Vec next = step(model, x, rng);
        Vec xi = sub(next, mean_next);
        for (int c = 0; c < d; ++c) {
            sum[c] += xi[c];
            sumsq[c] += xi[c] * xi[c];
        }
        ell_xi[i] = dot(s.left, xi);
        norm_p[i] = std::pow(l1_norm(xi), p);
    }

    MomentEstimates est;
    est.n_samples = n_samples;
    est.p = p;
    est.mean_vec.resize(d);
    est.mean_se.resize(d);
    const double n = static_cast<double>(n_samples);
    for (int c = 0; c < d; ++c) {
        est.mean_vec[c] = sum[c] / n;
        double var = std::max(0.0, sumsq[c] / n - est.mean_vec[c] * est.mean_vec[c]);
        est.mean_se[c] = std::sqrt(var / n);
    }

    // Variance of l xi, with SE from the fourth central moment.
    double m1 = 0.0;
    for (double v : ell_xi) m1 += v;
    m1 /= n;
    double m2 = 0.0, m4 = 0.0;
    for (double v : ell_xi) {
        double c2 = (v - m1) * (v - m1);
        m2 += c2;
        m4 += c2 * c2;
    }
    m2 /= n;
    m4 /= n;
    est.var_ell_xi = m2;
    est.var_ell_xi_se = std::sqrt(std::max(0.0, m4 - m2 * m2) / n);

    double mp = 0.0;
    for (double v : norm_p) mp += v;
    mp /= n;
    double vp = 0.0;
    for (double v : norm_p) vp += (v - mp) * (v - mp);
    vp /= n;
    est.abs_p_moment_of_norm = mp;
    est.abs_p_moment_se = std::sqrt(vp / n);
    return est;
}

} // namespace critlab
