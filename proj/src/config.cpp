#include "critlab/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "critlab/errors.hpp"
#include "critlab/models.hpp"

namespace critlab {

namespace {

const std::vector<std::string> kKnownKeys = {
    // model selection
    "model", "matrix_file", "rescale_to_critical", "tol_crit", "family",
    // bisexual / multitype parameters
    "r_mate", "beta", "q", "eta", "mean_rho", "mean_tau",
    // synthetic profiles and noise
    "drift_const", "drift_coeff", "drift_pow", "sigma2_const", "sigma2_coeff", "sigma2_pow",
    "noise", "absorb_below",
    // stop rule and ensemble
    "x0", "horizon", "upper_level", "n_traj", "master_seed", "n_threads",
    // sweep
    "sweep_param", "sweep_values",
    // criterion
    "epsilon_min", "region_a", "region_b", "delta", "sigma_cap", "band_u", "band_v",
    "max_magnitude",
};

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_double_value(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw InvalidConfigError("config key '" + key + "': expected a number, got '" + value +
                                 "'");
    }
}

CountFamily parse_family(const std::string& v) {
    if (v == "equidispersed") return CountFamily::Equidispersed;
    if (v == "bernoulli") return CountFamily::Bernoulli;
    if (v == "degenerate") return CountFamily::Degenerate;
    throw InvalidConfigError("config key 'family': unknown family '" + v + "'");
}

NoiseKind parse_noise(const std::string& v) {
    if (v == "none") return NoiseKind::None;
    if (v == "normal") return NoiseKind::Normal;
    if (v == "rademacher") return NoiseKind::Rademacher;
    throw InvalidConfigError("config key 'noise': unknown noise kind '" + v + "'");
}

} // namespace

const std::vector<std::string>& FlatConfig::known_keys() { return kKnownKeys; }

FlatConfig FlatConfig::parse_text(const std::string& text, const std::string& origin) {
    FlatConfig cfg;
    cfg.origin_ = origin;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        std::size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw InvalidConfigError(origin + ":" + std::to_string(lineno) +
                                     ": expected 'key = value', got '" + t + "'");
        std::string key = trim(t.substr(0, eq));
        std::string value = trim(t.substr(eq + 1));
        if (std::find(kKnownKeys.begin(), kKnownKeys.end(), key) == kKnownKeys.end())
            throw InvalidConfigError(origin + ":" + std::to_string(lineno) +
                                     ": unknown config key '" + key + "'");
        if (cfg.kv_.count(key))
            throw InvalidConfigError(origin + ":" + std::to_string(lineno) +
                                     ": duplicate config key '" + key + "'");
        cfg.kv_[key] = value;
    }
    return cfg;
}

FlatConfig FlatConfig::parse_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw InvalidConfigError(path + ": cannot open config file");
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_text(ss.str(), path);
}

bool FlatConfig::has(const std::string& key) const { return kv_.count(key) > 0; }

std::string FlatConfig::get_string(const std::string& key, const std::string& fallback) const {
    auto it = kv_.find(key);
    return it == kv_.end() ? fallback : it->second;
}

double FlatConfig::get_double(const std::string& key, double fallback) const {
    auto it = kv_.find(key);
    if (it == kv_.end()) return fallback;
    return parse_double_value(key, it->second);
}

std::int64_t FlatConfig::get_int(const std::string& key, std::int64_t fallback) const {
    double v = get_double(key, static_cast<double>(fallback));
    if (v != std::floor(v))
        throw InvalidConfigError("config key '" + key + "': expected an integer");
    return static_cast<std::int64_t>(v);
}

bool FlatConfig::get_bool(const std::string& key, bool fallback) const {
    auto it = kv_.find(key);
    if (it == kv_.end()) return fallback;
    if (it->second == "true" || it->second == "1") return true;
    if (it->second == "false" || it->second == "0") return false;
    throw InvalidConfigError("config key '" + key + "': expected true/false");
}

std::vector<double> FlatConfig::get_doubles(const std::string& key,
                                            const std::vector<double>& fallback) const {
    auto it = kv_.find(key);
    if (it == kv_.end()) return fallback;
    std::istringstream ss(it->second);
    std::vector<double> vals;
    std::string tok;
    while (ss >> tok) vals.push_back(parse_double_value(key, tok));
    return vals;
}

void FlatConfig::set(const std::string& key, const std::string& value) {
    if (std::find(kKnownKeys.begin(), kKnownKeys.end(), key) == kKnownKeys.end())
        throw InvalidConfigError("unknown config key '" + key + "'");
    kv_[key] = value;
}

std::string FlatConfig::canonical() const {
    std::string out;
    for (const auto& [k, v] : kv_) { // std::map iterates sorted
        if (k == "n_threads") continue; // thread count never affects results
        out += k;
        out += '=';
        out += v;
        out += '\n';
    }
    return out;
}

std::uint64_t FlatConfig::hash() const {
    std::uint64_t h = 0xcbf29ce484222325ULL; // FNV-1a 64
    for (unsigned char c : canonical()) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::unique_ptr<ProcessModel> build_model(const FlatConfig& cfg) {
    std::string kind = cfg.get_string("model", "");
    if (kind.empty()) throw InvalidConfigError("config key 'model' is required");

    if (kind == "bisexual") {
        BisexualModel::Params p;
        p.r_mate = static_cast<int>(cfg.get_int("r_mate", 1));
        p.beta = cfg.get_double("beta", 0.0);
        p.family = parse_family(cfg.get_string("family", "equidispersed"));
        p.eta = cfg.get_double("eta", 1.0);
        if (cfg.has("mean_rho")) p.mean_rho_override = cfg.get_double("mean_rho", 0.0);
        if (cfg.has("mean_tau")) p.mean_tau_override = cfg.get_double("mean_tau", 0.0);
        return std::make_unique<BisexualModel>(p);
    }

    if (kind == "multitype") {
        if (!cfg.has("matrix_file"))
            throw InvalidConfigError("config key 'matrix_file' is required for model=multitype");
        NonNegativeMatrix m = read_matrix_file(cfg.get_string("matrix_file", ""));
        MultitypeModel::Params p;
        p.beta = cfg.get_double("beta", 0.0);
        p.q = cfg.get_double("q", 1.0);
        p.family = parse_family(cfg.get_string("family", "equidispersed"));
        p.eta = cfg.get_double("eta", 1.0);
        p.tol_crit = cfg.get_double("tol_crit", 1e-9);
        p.rescale = cfg.get_bool("rescale_to_critical", false);
        return std::make_unique<MultitypeModel>(m, p);
    }

    if (kind == "synthetic") {
        SyntheticModel::Params p;
        if (cfg.has("matrix_file")) {
            NonNegativeMatrix m = read_matrix_file(cfg.get_string("matrix_file", ""));
            SpectralData s = perron_frobenius(m);
            if (cfg.get_bool("rescale_to_critical", false)) s = rescale_to_critical(s);
            assert_critical(s, cfg.get_double("tol_crit", 1e-9));
            p.spectral = std::move(s);
        } else {
            p.spectral = SyntheticModel::scalar_spectral();
        }
        p.drift_profile = {cfg.get_double("drift_const", 0.0), cfg.get_double("drift_coeff", 0.0),
                           cfg.get_double("drift_pow", 0.0)};
        p.sigma2_profile = {cfg.get_double("sigma2_const", 0.0),
                            cfg.get_double("sigma2_coeff", 0.0),
                            cfg.get_double("sigma2_pow", 0.0)};
        p.noise = parse_noise(cfg.get_string("noise", "none"));
        p.absorb_below = cfg.get_double("absorb_below", 0.0);
        return std::make_unique<SyntheticModel>(std::move(p));
    }

    throw InvalidConfigError("config key 'model': unknown model '" + kind + "'");
}

Vec resolve_x0(const FlatConfig& cfg, const ProcessModel& model) {
    Vec x0 = cfg.get_doubles("x0", Vec(static_cast<std::size_t>(model.dim()), 1.0));
    if (static_cast<int>(x0.size()) != model.dim())
        throw InvalidConfigError("config key 'x0': expected " + std::to_string(model.dim()) +
                                 " components");
    for (double v : x0)
        if (!(v >= 0.0))
            throw InvalidConfigError("config key 'x0': components must be >= 0");
    return x0;
}

StopRule resolve_stop_rule(const FlatConfig& cfg, const ProcessModel& model, const Vec& x0) {
    StopRule stop = default_stop_rule(model, x0);
    stop.horizon = cfg.get_int("horizon", stop.horizon);
    stop.upper_level = cfg.get_double("upper_level", stop.upper_level);
    if (stop.horizon < 1) throw InvalidConfigError("config key 'horizon': must be >= 1");
    if (!(stop.upper_level > 0.0))
        throw InvalidConfigError("config key 'upper_level': must be > 0");
    return stop;
}

EnsembleConfig resolve_ensemble(const FlatConfig& cfg, const ProcessModel& model) {
    EnsembleConfig e;
    e.x0 = resolve_x0(cfg, model);
    e.stop = resolve_stop_rule(cfg, model, e.x0);
    e.n_traj = static_cast<int>(cfg.get_int("n_traj", 100));
    e.master_seed = static_cast<std::uint64_t>(cfg.get_int("master_seed", 1));
    e.n_threads = static_cast<int>(cfg.get_int("n_threads", 1));
    if (e.n_traj < 1) throw InvalidConfigError("config key 'n_traj': must be >= 1");
    return e;
}

CriterionConfig resolve_criterion(const FlatConfig& cfg) {
    CriterionConfig c;
    c.epsilon_min = cfg.get_double("epsilon_min", c.epsilon_min);
    c.region_a = cfg.get_double("region_a", c.region_a);
    c.region_b = cfg.get_double("region_b", c.region_b);
    c.delta = cfg.get_double("delta", c.delta);
    c.sigma_cap = cfg.get_double("sigma_cap", c.sigma_cap);
    c.band_u = cfg.get_double("band_u", c.band_u);
    c.band_v = cfg.get_double("band_v", c.band_v);
    c.max_magnitude = cfg.get_double("max_magnitude", c.max_magnitude);
    c.validate();
    return c;
}

ModelFactory make_sweep_factory(const FlatConfig& cfg, const std::string& param) {
    static const std::vector<std::string> sweepable = {
        "beta", "r_mate", "q", "eta", "drift_const", "drift_coeff", "drift_pow",
        "sigma2_const", "sigma2_coeff", "sigma2_pow", "mean_rho", "mean_tau",
    };
    if (std::find(sweepable.begin(), sweepable.end(), param) == sweepable.end())
        throw InvalidConfigError("sweep_param '" + param + "' is not a sweepable model key");
    FlatConfig base = cfg;
    return [base, param](double value) -> std::unique_ptr<ProcessModel> {
        FlatConfig c = base;
        char buf[64];
        auto res = std::to_chars(buf, buf + sizeof(buf), value);
        c.set(param, std::string(buf, res.ptr));
        return build_model(c);
    };
}

} // namespace critlab
