#pragma once

#include <cstdint>
#include <vector>

namespace critlab {

// Offspring count families, parameterized by a per-parent mean m:
//   Equidispersed : Poisson(m), variance = mean
//   Bernoulli     : floor(m) + Bernoulli(m - floor(m)), small support
//   Degenerate    : llround(m), deterministic
enum class CountFamily { Equidispersed, Bernoulli, Degenerate };

const char* family_name(CountFamily f);

// Law of the sum of n iid per-parent counts. Closed under aggregation:
//   Equidispersed -> Poisson(n m)
//   Bernoulli     -> n floor(m) + Binomial(n, frac(m))
//   Degenerate    -> n llround(m)
struct AggregateCountLaw {
    CountFamily family = CountFamily::Equidispersed;
    std::int64_t n_parents = 0;
    double per_mean = 0.0;

    double mean() const;
    double variance() const;
};

// Survival table S(k) = P(S > k) on a window that carries all mass up to
// ~14 sigma; S(k) = 1 left of the window and 0 right of it.
class SurvivalWindow {
  public:
    static SurvivalWindow build(const AggregateCountLaw& law);

    double survival(std::int64_t k) const {
        if (k < first_) return 1.0;
        std::int64_t i = k - first_;
        if (i >= static_cast<std::int64_t>(surv_.size())) return 0.0;
        return surv_[static_cast<std::size_t>(i)];
    }
    // First k with S(k) < 1 (window start).
    std::int64_t first() const { return first_; }
    // First k with S(k) = 0 (window end).
    std::int64_t end() const { return first_ + static_cast<std::int64_t>(surv_.size()); }

  private:
    SurvivalWindow() = default;
    SurvivalWindow(std::int64_t first, std::vector<double> surv)
        : first_(first), surv_(std::move(surv)) {}

    static SurvivalWindow from_pmf(std::int64_t lo, const std::vector<double>& pmf);

    std::int64_t first_ = 0;
    std::vector<double> surv_;
};

// First two moments of min(A, r B) for independent aggregate sums A, B and
// integer r >= 1, via E[Y] = sum_k P(Y > k), E[Y^2] = sum_k (2k+1) P(Y > k).
struct MinMoments {
    double mean = 0.0;
    double second = 0.0;
    double variance() const { return second - mean * mean; }
};

MinMoments min_moments(const AggregateCountLaw& a, int r, const AggregateCountLaw& b);

} // namespace critlab
