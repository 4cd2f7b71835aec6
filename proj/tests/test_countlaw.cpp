#include <doctest.h>

#include <cmath>
#include <vector>

#include "critlab/countlaw.hpp"

using namespace critlab;

namespace {

// Brute-force oracles, independent of the survival-window implementation:
// truncated pmf arrays and a direct double sum over outcomes.

std::vector<double> poisson_pmf_direct(double lambda, int kmax) {
    std::vector<double> p(kmax + 1);
    p[0] = std::exp(-lambda);
    for (int k = 1; k <= kmax; ++k) p[k] = p[k - 1] * lambda / k;
    return p;
}

std::vector<double> binomial_pmf_direct(int n, double f) {
    std::vector<double> p(n + 1);
    for (int k = 0; k <= n; ++k) {
        double logc = 0.0;
        for (int i = 0; i < k; ++i) logc += std::log(double(n - i)) - std::log(double(i + 1));
        p[k] = std::exp(logc + k * std::log(f) + (n - k) * std::log1p(-f));
    }
    return p;
}

struct BruteMoments {
    double mean = 0.0, second = 0.0;
};

// E[min(A, rB)^m] by enumeration over the two supports, min computed via
// the identity 2 min(u, v) = u + v - |u - v|.
BruteMoments brute_min(const std::vector<double>& pa, std::int64_t a_shift,
                       const std::vector<double>& pb, std::int64_t b_shift, int r) {
    BruteMoments m;
    for (std::size_t i = 0; i < pa.size(); ++i) {
        double u = static_cast<double>(a_shift + static_cast<std::int64_t>(i));
        for (std::size_t j = 0; j < pb.size(); ++j) {
            double v = static_cast<double>(r) *
                       static_cast<double>(b_shift + static_cast<std::int64_t>(j));
            double y = 0.5 * (u + v - std::abs(u - v));
            double w = pa[i] * pb[j];
            m.mean += w * y;
            m.second += w * y * y;
        }
    }
    return m;
}

} // namespace

TEST_CASE("aggregate law moments per family") {
    AggregateCountLaw poisson{CountFamily::Equidispersed, 10, 1.3};
    CHECK(poisson.mean() == doctest::Approx(13.0));
    CHECK(poisson.variance() == doctest::Approx(13.0));

    AggregateCountLaw bern{CountFamily::Bernoulli, 10, 1.3};
    CHECK(bern.mean() == doctest::Approx(13.0));
    CHECK(bern.variance() == doctest::Approx(10.0 * 0.3 * 0.7));

    AggregateCountLaw degen{CountFamily::Degenerate, 10, 2.0};
    CHECK(degen.mean() == doctest::Approx(20.0));
    CHECK(degen.variance() == 0.0);
}

TEST_CASE("min_moments: degenerate pair reproduces plain min") {
    // rho = 2 per parent, tau = 1 per parent, 4 parents, r = 1:
    // min(8, 4) = 4
    AggregateCountLaw a{CountFamily::Degenerate, 4, 2.0};
    AggregateCountLaw b{CountFamily::Degenerate, 4, 1.0};
    MinMoments mm = min_moments(a, 1, b);
    CHECK(mm.mean == doctest::Approx(4.0));
    CHECK(mm.second == doctest::Approx(16.0));
    CHECK(mm.variance() == doctest::Approx(0.0));
}

TEST_CASE("min_moments vs brute force: poisson, r = 2, unbalanced") {
    const double la = 3.2, lb = 1.4;
    AggregateCountLaw a{CountFamily::Equidispersed, 4, 0.8}; // Poisson(3.2)
    AggregateCountLaw b{CountFamily::Equidispersed, 2, 0.7}; // Poisson(1.4)
    MinMoments mm = min_moments(a, 2, b);
    BruteMoments br = brute_min(poisson_pmf_direct(la, 60), 0, poisson_pmf_direct(lb, 60), 0, 2);
    CHECK(mm.mean == doctest::Approx(br.mean).epsilon(1e-11));
    CHECK(mm.second == doctest::Approx(br.second).epsilon(1e-11));
}

TEST_CASE("min_moments vs brute force: bernoulli family") {
    // per-parent mean 1.3 => base 1 + Bern(0.3); 6 parents
    AggregateCountLaw a{CountFamily::Bernoulli, 6, 1.3};
    AggregateCountLaw b{CountFamily::Bernoulli, 6, 0.6};
    MinMoments mm = min_moments(a, 1, b);
    BruteMoments br =
        brute_min(binomial_pmf_direct(6, 0.3), 6, binomial_pmf_direct(6, 0.6), 0, 1);
    CHECK(mm.mean == doctest::Approx(br.mean).epsilon(1e-12));
    CHECK(mm.second == doctest::Approx(br.second).epsilon(1e-12));
}

TEST_CASE("min_moments vs brute force: mixed families") {
    AggregateCountLaw a{CountFamily::Equidispersed, 5, 1.0}; // Poisson(5)
    AggregateCountLaw b{CountFamily::Degenerate, 3, 1.0};    // = 3
    MinMoments mm = min_moments(a, 1, b);
    std::vector<double> pb = {1.0};
    BruteMoments br = brute_min(poisson_pmf_direct(5.0, 80), 0, pb, 3, 1);
    CHECK(mm.mean == doctest::Approx(br.mean).epsilon(1e-11));
    CHECK(mm.second == doctest::Approx(br.second).epsilon(1e-11));
}

TEST_CASE("balanced poisson at large size matches the sqrt asymptotics") {
    // A, B ~ Poisson(x): E min = x - sqrt(x/pi) + o(sqrt x)
    const double x = 1e6;
    AggregateCountLaw a{CountFamily::Equidispersed, 1000000, 1.0};
    MinMoments mm = min_moments(a, 1, a);
    CHECK(std::abs(mm.mean - (x - std::sqrt(x / M_PI))) < 1.0);
    // Var(min) ~ x (1 - 1/pi) for this symmetric case
    CHECK(mm.variance() == doctest::Approx(x * (1.0 - 1.0 / M_PI)).epsilon(0.01));
}

TEST_CASE("empty populations have zero moments") {
    AggregateCountLaw a{CountFamily::Equidispersed, 0, 1.0};
    MinMoments mm = min_moments(a, 1, a);
    CHECK(mm.mean == 0.0);
    CHECK(mm.second == 0.0);
}
