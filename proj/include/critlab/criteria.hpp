#pragma once

#include <functional>
#include <string>
#include <vector>

#include "critlab/engine.hpp"
#include "critlab/linalg.hpp"
#include "critlab/spectral.hpp"

namespace critlab {

// Numerical evaluation of the recurrence/transience criteria over sampled
// state grids. The checked inequalities, with epsilon searched over
// [epsilon_min, 1):
//   recurrence:  l x * l g(x) <= (1-eps)/2 sigma2(x)   inside the region
//                ||x_check||^2 <= a ||x|| ||g(x)||
//   transience:  l x * l g(x) >= (1+eps)/2 sigma2(x)   inside the region
//                ||x_check||^2 <= a sigma2(x)
// plus growth and positivity audits on sigma2 for the transient side.
// In one dimension x_check = 0 and both regions are the whole half-line.

struct CriterionConfig {
    double epsilon_min = 1e-3;
    double region_a = 1.0;
    double region_b = 16.0; // lower magnitude cutoff, > 0
    double delta = 1.0;     // exponent in the sigma growth audit
    double sigma_cap = 1e3; // cap on the fitted growth ratio
    double band_u = 1.0;    // sigma2 positivity band (band_u, band_v) on l x
    double band_v = 100.0;
    double max_magnitude = 1e8;
    std::vector<double> ray_offsets = {0.0, 1e-3, 1e-2, 1e-1};
    // Explicit audit grids; when empty, defaults are built from the fields
    // above (magnitudes region_b * 2^i up to max_magnitude).
    std::vector<double> grid_1d;
    std::vector<Vec> grid_nd;

    void validate() const;
};

enum class Verdict { Recurrent, Transient, Indeterminate };
const char* verdict_name(Verdict v);

struct Violation {
    Vec state;
    double lhs = 0.0;        // l x * l g(x)
    double rhs = 0.0;        // (1 -+ epsilon_min)/2 sigma2(x)
    std::string side;        // "recurrence" or "transience"
};

struct AuditResult {
    bool run = false;
    bool pass = false;
    double detail = 0.0;
};

struct CriterionVerdict {
    Verdict verdict = Verdict::Indeterminate;
    double witness_epsilon = 0.0; // largest epsilon certified, 0 if none
    std::vector<Violation> violations;
    AuditResult near_criticality; // (A1)/(A1*)
    AuditResult sigma_growth;     // (sigma)/(sigma2)
    AuditResult sigma_positive;   // bounded away from zero on the band
    AuditResult moment_bound;     // (A2)/(A2*), filled from probes when available
};

using ScalarMap = std::function<double(double)>;
using VectorField = std::function<Vec(const Vec&)>;
using StateMap = std::function<double(const Vec&)>;

CriterionVerdict classify_univariate(const ScalarMap& g, const ScalarMap& sigma2,
                                     const CriterionConfig& cfg);

// ||x_check||_1^2 <= a ||x||_1 ||g(x)||_1 (boundary inclusive).
bool in_recurrence_region(const Vec& x, const Vec& g_of_x, const SpectralData& s, double a);

// ||x_check||_1^2 <= a sigma2(x).
bool in_transience_region(const Vec& x, double sigma2_of_x, const SpectralData& s, double a);

// Throws NegativeDriftError if d >= 2 and g has a negative component on the
// grid (for d = 1 the criteria reduce to the univariate ones, which carry no
// sign hypothesis).
CriterionVerdict classify_multivariate(const VectorField& g, const StateMap& sigma2,
                                       const SpectralData& s, const CriterionConfig& cfg);

// Multiplicative-form diagnostics h = g/x, tau2 = sigma2/x^2 (univariate) or
// h = l g / l x, tau2 = sigma2 / (l x)^2. Comparisons h vs (1 -+ eps)/2 tau2
// are algebraically the raw comparisons.
struct NormalizedDiagnostics {
    double h = 0.0;
    double tau2 = 0.0;
};
NormalizedDiagnostics normalized_diagnostics(const ScalarMap& g, const ScalarMap& sigma2,
                                             double x);
NormalizedDiagnostics normalized_diagnostics(const VectorField& g, const StateMap& sigma2,
                                             const SpectralData& s, const Vec& x);

// (A1*) audit: per-decade max of ||g||/||x|| must be non-increasing across
// decades with the largest-decade value <= 0.1. Grid must span >= 3 decades.
AuditResult audit_near_criticality(const VectorField& g, const std::vector<Vec>& grid);

// (A2)/(A2*) audit from noise probes: ratio E||xi||^p / sigma^p(x) bounded
// at every audited state; detail = max ratio.
struct MomentAuditPoint {
    double sigma2 = 0.0;
    MomentEstimates probe;
};
AuditResult audit_moment_bound(const std::vector<MomentAuditPoint>& points, double p,
                               double cap = 1e6);

std::vector<double> default_grid_1d(const CriterionConfig& cfg);
std::vector<Vec> default_grid_nd(const SpectralData& s, const CriterionConfig& cfg);

} // namespace critlab
