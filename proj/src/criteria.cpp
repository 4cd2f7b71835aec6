#include "critlab/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "critlab/errors.hpp"

namespace critlab {

namespace {

constexpr double kEpsCap = 1.0 - 1e-9; // witness epsilon stays inside (0,1)

// Largest epsilon admissible at one state, or -inf when no epsilon works.
// recurrence side: lhs <= (1-eps) * half_sigma2
// transience side: lhs >= (1+eps) * half_sigma2
double point_epsilon(double lhs, double half_sigma2, bool recurrence) {
    if (half_sigma2 > 0.0) {
        double e = recurrence ? 1.0 - lhs / half_sigma2 : lhs / half_sigma2 - 1.0;
        return std::min(e, kEpsCap);
    }
    // sigma2 = 0: the inequality is epsilon-free.
    bool ok = recurrence ? lhs <= 0.0 : lhs >= 0.0;
    return ok ? kEpsCap : -std::numeric_limits<double>::infinity();
}

struct SideResult {
    bool certified = false;
    double witness = 0.0;
    int constrained = 0;
    std::vector<Violation> violations;
};

// One inequality side over the constrained states. States outside the region
// impose nothing (vacuous implication); a side with zero constrained states
// is never certified.
template <typename States, typename InRegion, typename LhsRhs>
SideResult evaluate_side(const States& states, const InRegion& in_region, const LhsRhs& lhs_rhs,
                         bool recurrence, double eps_min) {
    SideResult res;
    double witness = kEpsCap;
    bool all_ok = true;
    for (const auto& st : states) {
        if (!in_region(st)) continue;
        ++res.constrained;
        auto [lhs, half_s2, state_vec] = lhs_rhs(st);
        double e = point_epsilon(lhs, half_s2, recurrence);
        witness = std::min(witness, e);
        if (e < eps_min) {
            all_ok = false;
            Violation v;
            v.state = state_vec;
            v.lhs = lhs;
            v.rhs = (recurrence ? (1.0 - eps_min) : (1.0 + eps_min)) * half_s2;
            v.side = recurrence ? "recurrence" : "transience";
            res.violations.push_back(std::move(v));
        }
    }
    res.certified = res.constrained > 0 && all_ok;
    res.witness = res.certified ? std::max(witness, 0.0) : 0.0;
    return res;
}

// sigma growth audit: q(x) = sigma2(x) (log ||x||)^(2/delta) / ||x||^2 must
// be non-increasing across decades (from the first decade past the boundary
// function's hump at e^(2/delta)) and end below the cap. A finite proxy for
// sigma2 = O(||x||^2 log^(-2/delta) ||x||).
template <typename States, typename NormOf, typename Sigma2Of>
AuditResult sigma_growth_audit(const States& states, const NormOf& norm_of,
                               const Sigma2Of& sigma2_of, double delta, double cap) {
    AuditResult audit;
    audit.run = true;
    std::map<int, double> decade_max;
    for (const auto& st : states) {
        double nx = norm_of(st);
        if (nx < 10.0) continue;
        double q = sigma2_of(st) * std::pow(std::log(nx), 2.0 / delta) / (nx * nx);
        int dec = static_cast<int>(std::floor(std::log10(nx)));
        auto [it, inserted] = decade_max.emplace(dec, q);
        if (!inserted) it->second = std::max(it->second, q);
    }
    if (decade_max.empty()) {
        audit.pass = false;
        return audit;
    }
    const double hump = std::exp(2.0 / delta);
    double prev = std::numeric_limits<double>::infinity();
    bool monotone = true;
    double last = 0.0;
    for (auto& [dec, q] : decade_max) {
        double decade_lo = std::pow(10.0, dec);
        last = q;
        if (decade_lo < hump) continue; // still left of the hump, skip
        if (q > prev * (1.0 + 1e-6)) monotone = false;
        prev = q;
    }
    audit.detail = last;
    audit.pass = monotone && last <= cap;
    return audit;
}

template <typename States, typename Sigma2Of, typename EllOf>
AuditResult sigma_positive_audit(const States& states, const Sigma2Of& sigma2_of,
                                 const EllOf& ell_of, double u, double v) {
    AuditResult audit;
    audit.run = true;
    double min_s2 = std::numeric_limits<double>::infinity();
    int n = 0;
    for (const auto& st : states) {
        double lx = ell_of(st);
        if (!(lx > u && lx < v)) continue;
        ++n;
        min_s2 = std::min(min_s2, sigma2_of(st));
    }
    if (n == 0) {
        audit.pass = false;
        return audit;
    }
    audit.detail = min_s2;
    audit.pass = min_s2 > 0.0;
    return audit;
}

Verdict combine(const SideResult& rec, const SideResult& trans, bool trans_audits_pass,
                CriterionVerdict& out) {
    bool rec_ok = rec.certified;
    bool trans_ok = trans.certified && trans_audits_pass;
    if (rec_ok && !trans_ok) {
        out.witness_epsilon = rec.witness;
        return Verdict::Recurrent;
    }
    if (trans_ok && !rec_ok) {
        out.witness_epsilon = trans.witness;
        return Verdict::Transient;
    }
    // Neither side certified, or contradictory certificates (degenerate
    // sigma2 on the grid): no classification.
    out.witness_epsilon = 0.0;
    out.violations.insert(out.violations.end(), rec.violations.begin(), rec.violations.end());
    out.violations.insert(out.violations.end(), trans.violations.begin(),
                          trans.violations.end());
    return Verdict::Indeterminate;
}

std::vector<double> log_spaced(double lo, double hi, int n) {
    std::vector<double> xs;
    xs.reserve(n);
    double llo = std::log(lo), lhi = std::log(hi);
    for (int i = 0; i < n; ++i)
        xs.push_back(std::exp(llo + (lhi - llo) * i / (n - 1)));
    return xs;
}

} // namespace

void CriterionConfig::validate() const {
    if (!(epsilon_min > 0.0 && epsilon_min < 1.0))
        throw InvalidConfigError("criterion: epsilon_min must be in (0,1)");
    if (!(region_a > 0.0)) throw InvalidConfigError("criterion: region_a must be > 0");
    if (!(region_b > 0.0)) throw InvalidConfigError("criterion: region_b must be > 0");
    if (!(delta > 0.0)) throw InvalidConfigError("criterion: delta must be > 0");
    if (!(band_u > 0.0 && band_v > band_u))
        throw InvalidConfigError("criterion: need 0 < band_u < band_v");
    if (!(max_magnitude >= region_b))
        throw InvalidConfigError("criterion: max_magnitude must be >= region_b");
}

const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Recurrent: return "Recurrent";
        case Verdict::Transient: return "Transient";
        case Verdict::Indeterminate: return "Indeterminate";
    }
    return "?";
}

std::vector<double> default_grid_1d(const CriterionConfig& cfg) {
    std::vector<double> xs;
    for (double m = cfg.region_b; m <= cfg.max_magnitude; m *= 2.0) xs.push_back(m);
    return xs;
}

std::vector<Vec> default_grid_nd(const SpectralData& s, const CriterionConfig& cfg) {
    const int d = s.dim();
    std::vector<Vec> grid;
    const double r_norm = l1_norm(s.right);

    // Directions u with l u = 0, normalized to ||u||_1 = 1.
    std::vector<Vec> dirs;
    for (int k = 0; k + 1 < d; ++k) {
        Vec u(d, 0.0);
        u[k] = 1.0 / s.left[k];
        u[k + 1] = -1.0 / s.left[k + 1];
        double nu = l1_norm(u);
        for (double& c : u) c /= nu;
        dirs.push_back(u);
        dirs.push_back(scaled(u, -1.0));
    }

    for (double m = cfg.region_b; m <= cfg.max_magnitude; m *= 2.0) {
        for (double off : cfg.ray_offsets) {
            if (off == 0.0 || dirs.empty()) {
                grid.push_back(scaled(s.right, m));
                continue;
            }
            for (const Vec& u : dirs) {
                Vec x = scaled(s.right, m);
                // perturbation of l1 size off * ||x_hat||_1, l-orthogonal
                for (int i = 0; i < d; ++i) x[i] += off * m * r_norm * u[i];
                for (double& c : x) c = std::max(0.0, c); // clip to the orthant
                if (dot(s.left, x) > 0.0) grid.push_back(std::move(x));
            }
        }
    }
    return grid;
}

bool in_recurrence_region(const Vec& x, const Vec& g_of_x, const SpectralData& s, double a) {
    Decomposition dec = decompose(x, s);
    double cx = l1_norm(dec.check);
    return cx * cx <= a * l1_norm(x) * l1_norm(g_of_x);
}

bool in_transience_region(const Vec& x, double sigma2_of_x, const SpectralData& s, double a) {
    Decomposition dec = decompose(x, s);
    double cx = l1_norm(dec.check);
    return cx * cx <= a * sigma2_of_x;
}

CriterionVerdict classify_univariate(const ScalarMap& g, const ScalarMap& sigma2,
                                     const CriterionConfig& cfg) {
    cfg.validate();
    std::vector<double> grid = cfg.grid_1d.empty() ? default_grid_1d(cfg) : cfg.grid_1d;
    for (double x : grid)
        if (!(x >= cfg.region_b))
            throw InvalidConfigError("classify_univariate: grid point below region_b");

    CriterionVerdict out;

    auto everywhere = [](double) { return true; };
    auto lhs_rhs = [&](double x) {
        return std::tuple<double, double, Vec>{x * g(x), 0.5 * sigma2(x), Vec{x}};
    };
    SideResult rec = evaluate_side(grid, everywhere, lhs_rhs, /*recurrence=*/true,
                                   cfg.epsilon_min);
    SideResult trans = evaluate_side(grid, everywhere, lhs_rhs, /*recurrence=*/false,
                                     cfg.epsilon_min);

    auto gv = [&](const Vec& x) { return Vec{g(x[0])}; };
    std::vector<Vec> grid_vecs;
    grid_vecs.reserve(grid.size());
    for (double x : grid) grid_vecs.push_back(Vec{x});
    out.near_criticality = audit_near_criticality(gv, grid_vecs);

    out.sigma_growth = sigma_growth_audit(
        grid, [](double x) { return x; }, [&](double x) { return sigma2(x); }, cfg.delta,
        cfg.sigma_cap);
    out.sigma_positive = sigma_positive_audit(
        log_spaced(cfg.band_u, cfg.band_v, 64), [&](double x) { return sigma2(x); },
        [](double x) { return x; }, cfg.band_u, cfg.band_v);

    out.verdict = combine(rec, trans, out.sigma_growth.pass && out.sigma_positive.pass, out);
    return out;
}

CriterionVerdict classify_multivariate(const VectorField& g, const StateMap& sigma2,
                                       const SpectralData& s, const CriterionConfig& cfg) {
    cfg.validate();
    const int d = s.dim();
    std::vector<Vec> grid = cfg.grid_nd.empty() ? default_grid_nd(s, cfg) : cfg.grid_nd;

    struct Point {
        Vec x;
        Vec gx;
        double s2;
        double lx;
    };
    std::vector<Point> pts;
    pts.reserve(grid.size());
    for (Vec& x : grid) {
        Point p;
        p.gx = g(x);
        if (static_cast<int>(p.gx.size()) != d)
            throw DimensionMismatchError("classify_multivariate: g(x) has wrong dimension");
        if (d >= 2) {
            for (double c : p.gx)
                if (c < 0.0)
                    throw NegativeDriftError(
                        "classify_multivariate: g has a negative component on the grid; "
                        "the multivariate criteria require g >= 0 componentwise");
        }
        p.s2 = sigma2(x);
        p.lx = dot(s.left, x);
        p.x = std::move(x);
        pts.push_back(std::move(p));
    }

    CriterionVerdict out;
    auto lhs_rhs = [&](const Point& p) {
        return std::tuple<double, double, Vec>{p.lx * dot(s.left, p.gx), 0.5 * p.s2, p.x};
    };
    SideResult rec = evaluate_side(
        pts, [&](const Point& p) { return in_recurrence_region(p.x, p.gx, s, cfg.region_a); },
        lhs_rhs, /*recurrence=*/true, cfg.epsilon_min);
    SideResult trans = evaluate_side(
        pts, [&](const Point& p) { return in_transience_region(p.x, p.s2, s, cfg.region_a); },
        lhs_rhs, /*recurrence=*/false, cfg.epsilon_min);

    std::vector<Vec> states_only;
    states_only.reserve(pts.size());
    for (const Point& p : pts) states_only.push_back(p.x);
    out.near_criticality = audit_near_criticality(g, states_only);

    out.sigma_growth = sigma_growth_audit(
        pts, [](const Point& p) { return l1_norm(p.x); },
        [](const Point& p) { return p.s2; }, cfg.delta, cfg.sigma_cap);

    // Positivity band: states l x in (u, v) sampled along the ray and the
    // grid's off-ray directions.
    std::vector<Vec> band_states;
    for (double m : log_spaced(cfg.band_u, cfg.band_v, 32)) {
        Vec ray = scaled(s.right, m);
        band_states.push_back(ray);
        for (double off : cfg.ray_offsets) {
            if (off == 0.0) continue;
            for (int k = 0; k + 1 < d; ++k) {
                Vec x = ray;
                x[k] += off * m;
                if (dot(s.left, x) > 0.0) band_states.push_back(x);
            }
        }
    }
    out.sigma_positive = sigma_positive_audit(
        band_states, [&](const Vec& x) { return sigma2(x); },
        [&](const Vec& x) { return dot(s.left, x); }, cfg.band_u, cfg.band_v);

    out.verdict = combine(rec, trans, out.sigma_growth.pass && out.sigma_positive.pass, out);
    return out;
}

NormalizedDiagnostics normalized_diagnostics(const ScalarMap& g, const ScalarMap& sigma2,
                                             double x) {
    if (x == 0.0) throw InvalidConfigError("normalized_diagnostics: x must be nonzero");
    NormalizedDiagnostics nd;
    nd.h = g(x) / x;
    nd.tau2 = sigma2(x) / (x * x);
    return nd;
}

NormalizedDiagnostics normalized_diagnostics(const VectorField& g, const StateMap& sigma2,
                                             const SpectralData& s, const Vec& x) {
    double lx = dot(s.left, x);
    if (!(lx > 0.0)) throw InvalidConfigError("normalized_diagnostics: l x must be > 0");
    NormalizedDiagnostics nd;
    nd.h = dot(s.left, g(x)) / lx;
    nd.tau2 = sigma2(x) / (lx * lx);
    return nd;
}

AuditResult audit_near_criticality(const VectorField& g, const std::vector<Vec>& grid) {
    std::map<int, double> decade_max;
    for (const Vec& x : grid) {
        double nx = l1_norm(x);
        if (!(nx > 0.0)) continue;
        double ratio = l1_norm(g(x)) / nx;
        int dec = static_cast<int>(std::floor(std::log10(nx)));
        auto [it, inserted] = decade_max.emplace(dec, ratio);
        if (!inserted) it->second = std::max(it->second, ratio);
    }
    if (decade_max.size() < 3)
        throw InvalidConfigError("audit_near_criticality: grid must span >= 3 decades");

    AuditResult audit;
    audit.run = true;
    double prev = std::numeric_limits<double>::infinity();
    bool monotone = true;
    double last = 0.0;
    for (auto& [dec, ratio] : decade_max) {
        if (ratio > prev + 1e-12) monotone = false;
        prev = ratio;
        last = ratio;
    }
    audit.detail = last;
    audit.pass = monotone && last <= 0.1;
    return audit;
}

AuditResult audit_moment_bound(const std::vector<MomentAuditPoint>& points, double p,
                               double cap) {
    AuditResult audit;
    audit.run = true;
    audit.pass = true;
    for (const MomentAuditPoint& pt : points) {
        if (pt.probe.abs_p_moment_of_norm == 0.0) continue;
        if (!(pt.sigma2 > 0.0)) {
            audit.pass = false;
            continue;
        }
        double ratio = pt.probe.abs_p_moment_of_norm / std::pow(pt.sigma2, p / 2.0);
        audit.detail = std::max(audit.detail, ratio);
        if (!(ratio <= cap)) audit.pass = false;
    }
    return audit;
}

} // namespace critlab
