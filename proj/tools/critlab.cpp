// critlab — near-critical growth process laboratory.
//
// Subcommands: spectral, classify, simulate, sweep, probe.
// Exit codes: 0 ok, 2 not primitive, 3 not critical, 4 config error,
// 5 runtime/overflow.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "critlab/config.hpp"
#include "critlab/criteria.hpp"
#include "critlab/errors.hpp"
#include "critlab/models.hpp"
#include "critlab/montecarlo.hpp"
#include "critlab/report.hpp"
#include "critlab/spectral.hpp"

namespace {

using namespace critlab;

constexpr int kExitOk = 0;
constexpr int kExitNotPrimitive = 2;
constexpr int kExitNotCritical = 3;
constexpr int kExitConfig = 4;
constexpr int kExitRuntime = 5;

struct CommonFlags {
    std::string config_path;
    std::string out_path;
    std::optional<std::int64_t> seed;
    std::optional<std::int64_t> traj;
    std::optional<int> threads;
};

void add_common(CLI::App* cmd, CommonFlags& f, bool config_required = true) {
    auto* opt = cmd->add_option("--config", f.config_path, "flat key=value config file");
    if (config_required) opt->required();
    cmd->add_option("--out", f.out_path, "output file (default: stdout)");
    cmd->add_option("--seed", f.seed, "override master_seed");
    cmd->add_option("--traj", f.traj, "override n_traj");
    cmd->add_option("--threads", f.threads, "worker threads (or env CRITLAB_THREADS)");
}

FlatConfig load_config(const CommonFlags& f) {
    FlatConfig cfg = FlatConfig::parse_file(f.config_path);
    if (f.seed) cfg.set("master_seed", std::to_string(*f.seed));
    if (f.traj) cfg.set("n_traj", std::to_string(*f.traj));
    if (f.threads) {
        cfg.set("n_threads", std::to_string(*f.threads));
    } else if (const char* env = std::getenv("CRITLAB_THREADS")) {
        cfg.set("n_threads", env);
    }
    return cfg;
}

void emit(const CommonFlags& f, const std::string& content) {
    if (f.out_path.empty()) {
        std::cout << content;
        return;
    }
    std::ofstream out(f.out_path, std::ios::binary);
    if (!out) throw InvalidConfigError(f.out_path + ": cannot open output file");
    out << content;
}

int cmd_spectral(const std::string& matrix_path, double tol_crit, bool rescale) {
    NonNegativeMatrix m = read_matrix_file(matrix_path);
    SpectralData s = perron_frobenius(m);
    if (rescale) s = rescale_to_critical(s);

    std::ostringstream os;
    os << "dim: " << s.dim() << "\n";
    os << "primitivity_power: " << s.primitivity_power << "\n";
    os << "lambda1: " << fmt_double(s.lambda1) << "\n";
    os << "left:";
    for (double v : s.left) os << ' ' << fmt_double(v);
    os << "\nright:";
    for (double v : s.right) os << ' ' << fmt_double(v);
    os << "\n";
    std::cout << os.str();

    assert_critical(s, tol_crit); // exits 3 via NotCriticalError if violated
    return kExitOk;
}

int cmd_classify(const CommonFlags& flags) {
    FlatConfig cfg = load_config(flags);
    std::unique_ptr<ProcessModel> model = build_model(cfg);
    CriterionConfig crit = resolve_criterion(cfg);

    CriterionVerdict verdict;
    if (model->dim() == 1) {
        // Integer-lattice models require integer states; grid magnitudes are
        // rounded before evaluation.
        bool lattice = model->name() != "synthetic";
        auto adapt = [&](double x) { return lattice ? std::round(x) : x; };
        ScalarMap g = [&](double x) { return model->drift(Vec{adapt(x)})[0]; };
        ScalarMap s2 = [&](double x) { return model->sigma2(Vec{adapt(x)}); };
        verdict = classify_univariate(g, s2, crit);
    } else {
        VectorField g = [&](const Vec& x) { return model->drift(x); };
        StateMap s2 = [&](const Vec& x) { return model->sigma2(x); };
        verdict = classify_multivariate(g, s2, model->spectral(), crit);
    }

    std::string report = verdict_report_json(verdict, model->name(), cfg.hash()) + "\n";
    std::cout << report;
    if (!flags.out_path.empty()) {
        std::ofstream out(flags.out_path, std::ios::binary);
        if (!out) throw InvalidConfigError(flags.out_path + ": cannot open output file");
        out << report;
    }
    return kExitOk;
}

int cmd_simulate(const CommonFlags& flags) {
    FlatConfig cfg = load_config(flags);
    std::unique_ptr<ProcessModel> model = build_model(cfg);
    EnsembleConfig ens = resolve_ensemble(cfg, *model);

    std::vector<Trajectory> trajectories;
    trajectories.reserve(static_cast<std::size_t>(ens.n_traj));
    for (int i = 0; i < ens.n_traj; ++i)
        trajectories.push_back(simulate(*model, ens.x0, ens.stop, ens.master_seed,
                                        static_cast<std::uint64_t>(i)));

    std::ostringstream os;
    write_provenance(os, cfg.hash(), ens.master_seed);
    write_trajectory_csv(os, trajectories, model->dim());
    emit(flags, os.str());
    return kExitOk;
}

int cmd_sweep(const CommonFlags& flags) {
    FlatConfig cfg = load_config(flags);
    std::string param = cfg.get_string("sweep_param", "beta");
    std::vector<double> values = cfg.get_doubles("sweep_values", {});
    ModelFactory factory = make_sweep_factory(cfg, param);

    // Resolve the ensemble against the base model; x0/stop stay fixed
    // across the sweep.
    std::unique_ptr<ProcessModel> base = build_model(cfg);
    EnsembleConfig ens = resolve_ensemble(cfg, *base);

    std::vector<SweepRow> rows = phase_sweep(factory, values, ens);

    std::ostringstream os;
    write_provenance(os, cfg.hash(), ens.master_seed);
    write_sweep_csv(os, rows);
    emit(flags, os.str());
    return kExitOk;
}

int cmd_probe(const CommonFlags& flags, const std::string& x_str, int n_samples, double p_arg) {
    FlatConfig cfg = load_config(flags);
    std::unique_ptr<ProcessModel> model = build_model(cfg);

    Vec x;
    {
        std::istringstream ss(x_str);
        double v;
        while (ss >> v) x.push_back(v);
    }
    if (x.empty()) x = resolve_x0(cfg, *model);
    if (static_cast<int>(x.size()) != model->dim())
        throw InvalidConfigError("probe state --x: expected " + std::to_string(model->dim()) +
                                 " components");

    double p = p_arg > 0.0 ? p_arg : 2.0 + model->moment_delta();
    std::uint64_t seed = static_cast<std::uint64_t>(cfg.get_int("master_seed", 1));
    MomentEstimates est = noise_probe(*model, x, n_samples, p, seed);
    emit(flags, probe_report_json(est, x, cfg.hash(), seed) + "\n");
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"critlab: recurrence/transience criteria and Monte Carlo for near-critical "
                 "growth processes"};
    app.require_subcommand(1);

    // spectral
    std::string matrix_path;
    double tol_crit = 1e-9;
    bool rescale = false;
    CLI::App* sp = app.add_subcommand("spectral", "Perron-Frobenius data of a matrix file");
    sp->add_option("matrix_file", matrix_path, "matrix file (first line d, then d rows)")
        ->required();
    sp->add_option("--tol-crit", tol_crit, "criticality tolerance on |lambda1 - 1|");
    sp->add_flag("--rescale", rescale, "divide the matrix by lambda1 before reporting");

    CommonFlags classify_flags, simulate_flags, sweep_flags, probe_flags;
    CLI::App* cl = app.add_subcommand("classify", "evaluate the recurrence/transience criteria");
    add_common(cl, classify_flags);

    CLI::App* si = app.add_subcommand("simulate", "simulate trajectories, write CSV");
    add_common(si, simulate_flags);

    CLI::App* sw = app.add_subcommand("sweep", "parameter sweep of ensembles, write CSV");
    add_common(sw, sweep_flags);

    std::string probe_x;
    int probe_n = 10000;
    double probe_p = 0.0;
    CLI::App* pr = app.add_subcommand("probe", "one-step noise moment estimates at a state");
    add_common(pr, probe_flags);
    pr->add_option("--x", probe_x, "probe state, whitespace-separated components");
    pr->add_option("--n", probe_n, "number of samples");
    pr->add_option("--p", probe_p, "moment order (default 2 + delta)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (sp->parsed()) return cmd_spectral(matrix_path, tol_crit, rescale);
        if (cl->parsed()) return cmd_classify(classify_flags);
        if (si->parsed()) return cmd_simulate(simulate_flags);
        if (sw->parsed()) return cmd_sweep(sweep_flags);
        if (pr->parsed()) return cmd_probe(probe_flags, probe_x, probe_n, probe_p);
    } catch (const NotPrimitiveError& e) {
        std::cerr << "error: NotPrimitive: " << e.what() << "\n";
        return kExitNotPrimitive;
    } catch (const NotCriticalError& e) {
        std::cerr << "error: NotCritical: lambda1 = " << fmt_double(e.lambda1) << "\n";
        return kExitNotCritical;
    } catch (const InvalidConfigError& e) {
        std::cerr << "error: config: " << e.what() << "\n";
        return kExitConfig;
    } catch (const DimensionMismatchError& e) {
        std::cerr << "error: config: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitConfig;
}
