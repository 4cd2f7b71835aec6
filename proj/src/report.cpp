#include "critlab/report.hpp"

#include <charconv>
#include <cmath>

#include <json.hpp>

namespace critlab {

using nlohmann::json;

std::string fmt_double(double v) {
    if (std::isnan(v)) return "nan";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string fmt_hex64(std::uint64_t v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v, 16);
    return "0x" + std::string(buf, res.ptr);
}

void write_provenance(std::ostream& os, std::uint64_t config_hash, std::uint64_t master_seed) {
    os << "# critlab " << kVersion << "\n";
    os << "# config_hash=" << fmt_hex64(config_hash) << "\n";
    os << "# master_seed=" << master_seed << "\n";
}

void write_trajectory_csv(std::ostream& os, const std::vector<Trajectory>& trajectories,
                          int dim) {
    os << "trajectory_id,step";
    for (int c = 1; c <= dim; ++c) os << ",x_" << c;
    os << ",ell_x,check_ratio,stop_reason\n";
    for (std::size_t id = 0; id < trajectories.size(); ++id) {
        const Trajectory& t = trajectories[id];
        for (std::size_t n = 0; n < t.states.size(); ++n) {
            os << id << ',' << n;
            for (int c = 0; c < dim; ++c) os << ',' << fmt_double(t.states[n][c]);
            os << ',' << fmt_double(t.ell_x[n]) << ',' << fmt_double(t.check_ratio[n]) << ',';
            if (n + 1 == t.states.size()) os << stop_reason_name(t.stop_reason);
            os << '\n';
        }
    }
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
    os << "param_value,n_traj,extinct,diverged,exhausted,ext_freq,ext_ci_lo,ext_ci_hi,"
          "div_freq,div_ci_lo,div_ci_hi,median_check_ratio\n";
    for (const SweepRow& row : rows) {
        const EnsembleReport& r = row.report;
        os << fmt_double(row.param_value) << ',' << r.n_traj << ',' << r.extinct << ','
           << r.diverged << ',' << r.exhausted << ',' << fmt_double(r.extinction_freq.freq)
           << ',' << fmt_double(r.extinction_freq.lo) << ',' << fmt_double(r.extinction_freq.hi)
           << ',' << fmt_double(r.divergence_freq.freq) << ','
           << fmt_double(r.divergence_freq.lo) << ',' << fmt_double(r.divergence_freq.hi) << ',';
        if (r.diverged > 0)
            os << fmt_double(r.direction_stats.q50);
        else
            os << "nan";
        os << '\n';
    }
}

namespace {

json audit_json(const AuditResult& a) {
    return json{{"run", a.run}, {"pass", a.pass}, {"detail", a.detail}};
}

} // namespace

std::string verdict_report_json(const CriterionVerdict& verdict, const std::string& model_name,
                                std::uint64_t config_hash) {
    json j;
    j["version"] = kVersion;
    j["config_hash"] = fmt_hex64(config_hash);
    j["model"] = model_name;
    j["verdict"] = verdict_name(verdict.verdict);
    j["witness_epsilon"] = verdict.witness_epsilon;
    j["audits"] = {
        {"near_criticality", audit_json(verdict.near_criticality)},
        {"sigma_growth", audit_json(verdict.sigma_growth)},
        {"sigma_positive", audit_json(verdict.sigma_positive)},
        {"moment_bound", audit_json(verdict.moment_bound)},
    };
    json viols = json::array();
    for (const Violation& v : verdict.violations) {
        viols.push_back(json{
            {"state", v.state}, {"lhs", v.lhs}, {"rhs", v.rhs}, {"side", v.side}});
    }
    j["violations"] = viols;
    return j.dump(2);
}

std::string probe_report_json(const MomentEstimates& est, const Vec& x,
                              std::uint64_t config_hash, std::uint64_t seed) {
    json j;
    j["version"] = kVersion;
    j["config_hash"] = fmt_hex64(config_hash);
    j["seed"] = seed;
    j["x"] = x;
    j["n_samples"] = est.n_samples;
    j["p"] = est.p;
    j["mean_xi"] = est.mean_vec;
    j["mean_xi_se"] = est.mean_se;
    j["var_ell_xi"] = est.var_ell_xi;
    j["var_ell_xi_se"] = est.var_ell_xi_se;
    j["abs_p_moment_of_norm"] = est.abs_p_moment_of_norm;
    j["abs_p_moment_se"] = est.abs_p_moment_se;
    return j.dump(2);
}

std::string ensemble_report_json(const EnsembleReport& rep, std::uint64_t config_hash) {
    json j;
    j["version"] = kVersion;
    j["config_hash"] = fmt_hex64(config_hash);
    j["master_seed"] = rep.master_seed;
    j["n_traj"] = rep.n_traj;
    j["counts"] = {{"extinct", rep.extinct},
                   {"diverged", rep.diverged},
                   {"exhausted", rep.exhausted}};
    auto ci = [](const FreqCI& c) {
        return json{{"freq", c.freq}, {"ci_lo", c.lo}, {"ci_hi", c.hi}};
    };
    j["extinction"] = ci(rep.extinction_freq);
    j["divergence"] = ci(rep.divergence_freq);
    j["horizon_exhausted"] = ci(rep.horizon_exhausted_freq);
    if (rep.diverged > 0) {
        j["direction_stats"] = {{"n_divergent", rep.direction_stats.n_divergent},
                                {"q50", rep.direction_stats.q50},
                                {"q90", rep.direction_stats.q90},
                                {"max", rep.direction_stats.max}};
    }
    if (rep.gamma_hat) j["gamma_hat"] = *rep.gamma_hat;
    return j.dump(2);
}

} // namespace critlab
