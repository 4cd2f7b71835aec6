#include <doctest.h>

#include <cmath>
#include <vector>

#include "critlab/errors.hpp"
#include "critlab/models.hpp"
#include "test_util.hpp"

using namespace critlab;

TEST_CASE("mating function") {
    CHECK(mating(5, 3, 1) == doctest::Approx(3.0));
    CHECK(mating(0, 7, 2) == doctest::Approx(0.0));
    CHECK(mating(7, 0, 2) == doctest::Approx(0.0));
    CHECK(mating(10, 3, 2) == doctest::Approx(6.0));
    CHECK_THROWS_AS(mating(-1, 3, 1), InvalidConfigError);
}

TEST_CASE("bisexual_threshold") {
    CHECK(bisexual_threshold(2.0 * M_PI) == doctest::Approx(1.0));
    CHECK(bisexual_threshold(2.0) == doctest::Approx(std::sqrt(1.0 / M_PI)).epsilon(1e-12));
    CHECK(bisexual_threshold(8.0 * M_PI) == doctest::Approx(2.0));
    CHECK_THROWS_AS(bisexual_threshold(0.0), InvalidConfigError);
    CHECK_THROWS_AS(bisexual_threshold(-1.0), InvalidConfigError);
}

TEST_CASE("bisexual_drift_asymptotic") {
    CHECK(bisexual_drift_asymptotic(1.0, 2.0 * M_PI, 1e4) == doctest::Approx(0.0));
    CHECK(bisexual_drift_asymptotic(0.0, 2.0 * M_PI, 100.0) == doctest::Approx(-10.0));
    // beta=0.2, alpha=2, x=1e4: (0.2 - sqrt(1/pi)) * 100
    double expected = (0.2 - std::sqrt(1.0 / M_PI)) * 100.0;
    CHECK(expected == doctest::Approx(-36.419).epsilon(1e-4));
    CHECK(bisexual_drift_asymptotic(0.2, 2.0, 1e4) == doctest::Approx(expected).epsilon(1e-12));
    CHECK_THROWS_AS(bisexual_drift_asymptotic(0.2, -2.0, 1e4), InvalidConfigError);
}

TEST_CASE("bisexual family algebra: alpha = 1 + r for the default family") {
    for (int r : {1, 2, 5}) {
        BisexualModel::Params p;
        p.r_mate = r;
        p.beta = 0.5;
        BisexualModel m(p);
        CHECK(m.alpha() == doctest::Approx(1.0 + r));
        // v(x) = e(x)(1+r) at finite x
        for (double x : {100.0, 10000.0, 1000000.0}) {
            double e = 1.0 + 0.5 / std::sqrt(x);
            CHECK(m.v_of(x) == doctest::Approx(e * (1.0 + r)).epsilon(1e-12));
        }
    }
}

TEST_CASE("bisexual: balanced means and empirical v(x) tightening toward alpha") {
    BisexualModel::Params p;
    p.beta = 0.5;
    BisexualModel m(p);
    RandomStream rng(31, 0);
    double prev_gap = -1.0;
    for (double x : {100.0, 10000.0, 1000000.0}) {
        // per-couple offspring draws from the family definition
        const int n = 40000;
        std::vector<double> rho(n), tau(n), diff(n);
        for (int i = 0; i < n; ++i) {
            rho[i] = static_cast<double>(rng.next_poisson(m.couple_mean(x)));
            tau[i] = static_cast<double>(rng.next_poisson(m.mean_tau(x)));
            diff[i] = rho[i] - 1.0 * tau[i];
        }
        auto mr = testutil::mean_se(rho);
        auto mt = testutil::mean_se(tau);
        // balance: mean(rho) = r mean(tau), r = 1
        CHECK(std::abs(mr.mean - mt.mean) < 3.0 * (mr.se + mt.se));

        double v_hat = testutil::sample_variance(diff);
        double v_se = testutil::variance_se(diff);
        CHECK(std::abs(v_hat - m.v_of(x)) < 4.0 * v_se);

        // |v(x) - alpha| tightens deterministically
        double gap = std::abs(m.v_of(x) - m.alpha());
        if (prev_gap >= 0.0) CHECK(gap < prev_gap);
        prev_gap = gap;
    }
}

TEST_CASE("bisexual: polygamous balance mean(rho) = r mean(tau)") {
    BisexualModel::Params p;
    p.r_mate = 3;
    p.beta = 0.4;
    BisexualModel m(p);
    RandomStream rng(77, 0);
    const double x = 400.0;
    const int n = 50000;
    std::vector<double> rho(n), tau(n);
    for (int i = 0; i < n; ++i) {
        rho[i] = static_cast<double>(rng.next_poisson(m.couple_mean(x)));
        tau[i] = static_cast<double>(rng.next_poisson(m.mean_tau(x)));
    }
    auto mr = testutil::mean_se(rho);
    auto mt = testutil::mean_se(tau);
    CHECK(std::abs(mr.mean - 3.0 * mt.mean) < 3.0 * (mr.se + 3.0 * mt.se));
}

TEST_CASE("bisexual step: absorbing zero and degenerate offspring") {
    BisexualModel::Params p;
    p.r_mate = 1;
    p.family = CountFamily::Degenerate;
    p.mean_rho_override = 2.0;
    p.mean_tau_override = 1.0;
    BisexualModel m(p);
    RandomStream rng(1, 1);
    CHECK(m.next_state(Vec{0.0}, rng)[0] == 0.0);
    // rho = 2, tau = 1 per couple, x = 4: min(8, 4) = 4
    CHECK(m.next_state(Vec{4.0}, rng)[0] == doctest::Approx(4.0));
    CHECK(m.drift(Vec{4.0})[0] == doctest::Approx(0.0));
    CHECK(m.sigma2(Vec{4.0}) == doctest::Approx(0.0));
}

TEST_CASE("bisexual step: one-step mean matches x - sqrt(alpha x / 2 pi) at beta = 0") {
    BisexualModel m({});
    const double x = 1e4;
    const int n = 40000;
    RandomStream rng(5, 9);
    std::vector<double> next(n);
    for (double& v : next) v = static_cast<double>(m.sample_next_count(10000, rng));
    auto ms = testutil::mean_se(next);
    double predicted = x - std::sqrt(m.alpha() * x / (2.0 * M_PI));
    CHECK(std::abs(ms.mean - predicted) < 4.0 * ms.se);
    // the exact law moments agree too
    CHECK(std::abs(ms.mean - (x + m.drift(Vec{x})[0])) < 4.0 * ms.se);
}

TEST_CASE("bisexual: enumeration oracle for the small-support family, x <= 8") {
    // bernoulli family with fixed means: rho = 1 + Bern(0.3), tau = Bern(0.6),
    // r = 2. E_x[X_1] enumerated over all (sum rho, sum tau) outcomes using
    // 2 min(u,v) = u + v - |u - v|.
    BisexualModel::Params p;
    p.r_mate = 2;
    p.family = CountFamily::Bernoulli;
    p.mean_rho_override = 1.3;
    p.mean_tau_override = 0.6;
    BisexualModel m(p);

    auto binom_pmf = [](int n, double f, int k) {
        double logc = 0.0;
        for (int i = 0; i < k; ++i) logc += std::log(double(n - i)) - std::log(double(i + 1));
        return std::exp(logc + k * std::log(f) + (n - k) * std::log1p(-f));
    };

    for (int x : {1, 3, 8}) {
        double expected = 0.0;
        for (int i = 0; i <= x; ++i) {         // extra rho successes
            for (int j = 0; j <= x; ++j) {     // tau successes
                double u = static_cast<double>(x + i);      // sum rho
                double v = 2.0 * static_cast<double>(j);    // r * sum tau
                double mn = 0.5 * (u + v - std::abs(u - v));
                expected += binom_pmf(x, 0.3, i) * binom_pmf(x, 0.6, j) * mn;
            }
        }
        // exact law moments
        double xd = static_cast<double>(x);
        CHECK(m.drift(Vec{xd})[0] + xd == doctest::Approx(expected).epsilon(1e-10));

        // simulation mean within 4 SE
        const int n = 30000;
        RandomStream rng(17, static_cast<std::uint64_t>(x));
        std::vector<double> next(n);
        for (double& v : next) v = static_cast<double>(m.sample_next_count(x, rng));
        auto ms = testutil::mean_se(next);
        CHECK(std::abs(ms.mean - expected) < 4.0 * ms.se + 1e-12);
    }
}

TEST_CASE("multitype: drift formula and examples") {
    SpectralData s = perron_frobenius(NonNegativeMatrix(Matrix(2, {0.5, 0.5, 0.5, 0.5})));
    MultitypeModel::Params p;
    p.beta = 0.25;
    p.q = 1.0;
    MultitypeModel m(s, p);
    // q = 1: g = beta * r regardless of x
    Vec g = m.drift(Vec{3.0, 1.0});
    CHECK(g[0] == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(g[1] == doctest::Approx(0.25).epsilon(1e-12));

    MultitypeModel::Params p0;
    MultitypeModel m0(s, p0);
    CHECK(l1_norm(m0.drift(Vec{3.0, 1.0})) == doctest::Approx(0.0));
    CHECK(l1_norm(m0.drift(Vec{0.0, 0.0})) == doctest::Approx(0.0));

    // g equals (E_x - M) x evaluated directly
    Vec x{3.0, 1.0};
    Matrix ex = m.mean_matrix(x);
    Vec direct = sub(ex.apply(x), s.matrix.apply(x));
    CHECK(direct[0] == doctest::Approx(g[0]).epsilon(1e-12));
    CHECK(direct[1] == doctest::Approx(g[1]).epsilon(1e-12));
}

TEST_CASE("multitype sigma2: zero population, 1-d reduction, ray value") {
    SpectralData s2 = perron_frobenius(NonNegativeMatrix(Matrix(2, {0.5, 0.5, 0.5, 0.5})));
    MultitypeModel::Params p;
    MultitypeModel m(s2, p);
    CHECK(m.sigma2(Vec{0.0, 0.0}) == 0.0);
    // x = lambda (1,1): sigma2 = 0.5 lambda; sigma2_bar = 0.5
    for (double lam : {4.0, 64.0, 1024.0})
        CHECK(m.sigma2(Vec{lam, lam}) == doctest::Approx(0.5 * lam).epsilon(1e-12));
    CHECK(m.sigma2_bar() == doctest::Approx(0.5).epsilon(1e-12));

    // d = 1: reduces to Var(zeta) x = x for unit-mean equidispersed counts
    SpectralData s1 = perron_frobenius(NonNegativeMatrix(Matrix(1, {1.0})));
    MultitypeModel m1(s1, p);
    CHECK(m1.sigma2(Vec{37.0}) == doctest::Approx(37.0).epsilon(1e-12));
}

TEST_CASE("multitype step: mean identity E[step(x)] = E_x x") {
    SpectralData s = perron_frobenius(NonNegativeMatrix(Matrix(2, {0.5, 0.5, 0.5, 0.5})));
    MultitypeModel::Params p;
    p.beta = 0.3;
    MultitypeModel m(s, p);
    Vec x{7.0, 3.0};
    Vec target = m.mean_matrix(x).apply(x);

    const int n = 40000;
    RandomStream rng(23, 1);
    std::vector<double> c0(n), c1(n);
    for (int i = 0; i < n; ++i) {
        Vec nx = m.next_state(x, rng);
        c0[i] = nx[0];
        c1[i] = nx[1];
    }
    auto m0 = testutil::mean_se(c0);
    auto m1 = testutil::mean_se(c1);
    CHECK(std::abs(m0.mean - target[0]) < 3.5 * m0.se);
    CHECK(std::abs(m1.mean - target[1]) < 3.5 * m1.se);

    // beta = 0 reduces to E[step] = M x
    MultitypeModel crit(s, MultitypeModel::Params{});
    Vec mx = s.matrix.apply(x);
    RandomStream rng2(29, 1);
    std::vector<double> d0(n), d1(n);
    for (int i = 0; i < n; ++i) {
        Vec nx = crit.next_state(x, rng2);
        d0[i] = nx[0];
        d1[i] = nx[1];
    }
    auto e0 = testutil::mean_se(d0);
    auto e1 = testutil::mean_se(d1);
    CHECK(std::abs(e0.mean - mx[0]) < 3.5 * e0.se);
    CHECK(std::abs(e1.mean - mx[1]) < 3.5 * e1.se);

    CHECK(l1_norm(crit.next_state(Vec{0.0, 0.0}, rng2)) == 0.0);
}

TEST_CASE("multitype: trace condition holds with diagonal covariances") {
    SpectralData s = perron_frobenius(NonNegativeMatrix(Matrix(2, {0.3, 0.7, 0.7, 0.3})));
    MultitypeModel::Params p;
    p.beta = 0.2;
    MultitypeModel m(s, p);
    double min_l = std::min(s.left[0], s.left[1]);
    double bound = 1.0 / (min_l * min_l);
    for (double scale : {2.0, 50.0, 3000.0}) {
        Vec x{scale, 3.0 * scale};
        // trace Gamma_x = sum_k (E_x x)_k for the equidispersed family
        Vec ex = m.mean_matrix(x).apply(x);
        double trace = ex[0] + ex[1];
        CHECK(trace <= bound * m.sigma2(x) * (1.0 + 1e-12));
    }
}

TEST_CASE("multitype rejects non-primitive or non-critical mean matrices") {
    MultitypeModel::Params p;
    CHECK_THROWS_AS(MultitypeModel(NonNegativeMatrix(Matrix(2, {0.0, 1.0, 1.0, 0.0})), p),
                    NotPrimitiveError);
    CHECK_THROWS_AS(MultitypeModel(NonNegativeMatrix(Matrix(1, {2.0})), p), NotCriticalError);
    MultitypeModel::Params rescaled;
    rescaled.rescale = true;
    CHECK_NOTHROW(MultitypeModel(NonNegativeMatrix(Matrix(1, {2.0})), rescaled));
}
