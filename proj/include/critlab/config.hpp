#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "critlab/criteria.hpp"
#include "critlab/engine.hpp"
#include "critlab/montecarlo.hpp"

namespace critlab {

// Flat key = value configuration ('#' comments, blank lines ignored).
// Unknown keys are rejected with the offending key named. Multi-valued
// entries (x0, sweep_values) are whitespace-separated.
class FlatConfig {
  public:
    static FlatConfig parse_file(const std::string& path);
    static FlatConfig parse_text(const std::string& text, const std::string& origin);

    bool has(const std::string& key) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key, double fallback) const;
    std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    std::vector<double> get_doubles(const std::string& key,
                                    const std::vector<double>& fallback) const;

    // CLI overrides; key must be known.
    void set(const std::string& key, const std::string& value);

    // Sorted key=value lines; the provenance hash is FNV-1a 64 over this.
    std::string canonical() const;
    std::uint64_t hash() const;

    static const std::vector<std::string>& known_keys();

  private:
    std::string origin_ = "<config>";
    std::map<std::string, std::string> kv_;
};

std::unique_ptr<ProcessModel> build_model(const FlatConfig& cfg);

Vec resolve_x0(const FlatConfig& cfg, const ProcessModel& model);
StopRule resolve_stop_rule(const FlatConfig& cfg, const ProcessModel& model, const Vec& x0);
EnsembleConfig resolve_ensemble(const FlatConfig& cfg, const ProcessModel& model);
CriterionConfig resolve_criterion(const FlatConfig& cfg);

// Rebuilds the model with `param` overridden per sweep value; throws
// InvalidConfigError for a non-numeric or unknown parameter.
ModelFactory make_sweep_factory(const FlatConfig& cfg, const std::string& param);

} // namespace critlab
