#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "critlab/criteria.hpp"
#include "critlab/engine.hpp"
#include "critlab/montecarlo.hpp"

namespace critlab {

inline constexpr const char* kVersion = "0.1.0";

// Shortest round-trip decimal representation (std::to_chars); locale-free
// and byte-stable, which the reproducibility contract relies on.
std::string fmt_double(double v);
std::string fmt_hex64(std::uint64_t v);

// "# critlab <version>" / "# config_hash=..." / "# master_seed=..." CSV
// comment lines. Never includes thread counts or timestamps.
void write_provenance(std::ostream& os, std::uint64_t config_hash, std::uint64_t master_seed);

// Columns: trajectory_id, step, x_1..x_d, ell_x, check_ratio, stop_reason
// (stop_reason only on each trajectory's last row).
void write_trajectory_csv(std::ostream& os, const std::vector<Trajectory>& trajectories, int dim);

// Columns: param_value, n_traj, extinct, diverged, exhausted, ext_freq,
// ext_ci_lo, ext_ci_hi, div_freq, div_ci_lo, div_ci_hi, median_check_ratio.
void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows);

std::string verdict_report_json(const CriterionVerdict& verdict, const std::string& model_name,
                                std::uint64_t config_hash);

std::string probe_report_json(const MomentEstimates& est, const Vec& x,
                              std::uint64_t config_hash, std::uint64_t seed);

std::string ensemble_report_json(const EnsembleReport& rep, std::uint64_t config_hash);

} // namespace critlab
