#include <doctest.h>

#include <cmath>
#include <vector>

#include "fdim/carpet.hpp"
#include "fdim/rate.hpp"
#include "fdim/util.hpp"

using namespace fracdim;

static ColumnProfile fig() { return profile_from_counts(2, 3, {2, 1}); }

TEST_CASE("rate function endpoint values") {
    RateFn rf(fig());
    const ColumnProfile& p = rf.prof();
    CHECK(std::fabs(rf.rate_I(p.t_low)) <= 1e-12);
    CHECK(std::fabs(rf.lambda_of_t(p.t_low)) <= 1e-10);
    // at the entropy mean the tilt is exactly 1
    CHECK(rf.lambda_of_t(p.t_high) == doctest::Approx(1.0).epsilon(1e-10));
    // I(t_high) = log M - H(count distribution)
    double H = -(2.0 / 3.0) * std::log(2.0 / 3.0) - (1.0 / 3.0) * std::log(1.0 / 3.0);
    CHECK(rf.rate_I(p.t_high) == doctest::Approx(std::log(2.0) - H).epsilon(1e-12));
    CHECK(rf.rate_I(p.t_high) == doctest::Approx(0.0566330122651326).epsilon(1e-10));
    // at the top the rate is log M minus the log-multiplicity of maximal columns
    CHECK(rf.rate_I(p.t_max) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("rate domain is closed with a tolerance snap") {
    RateFn rf(fig());
    const ColumnProfile& p = rf.prof();
    CHECK_THROWS_AS(rf.rate_I(p.t_low - 1e-6), domain_error);
    CHECK_THROWS_AS(rf.rate_I(p.t_max + 1e-6), domain_error);
    CHECK(rf.rate_I(p.t_max + 1e-13) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    CHECK(std::fabs(rf.rate_I(p.t_low - 1e-13)) <= 1e-10);
}

TEST_CASE("rate function is convex and its slope is the tilt") {
    RateFn rf(fig());
    const ColumnProfile& p = rf.prof();
    double a = p.t_low, b = p.t_max - 1e-6;
    int n = 40;
    std::vector<double> ts, Is;
    for (int i = 0; i <= n; ++i) {
        double t = a + (b - a) * i / n;
        ts.push_back(t);
        Is.push_back(rf.rate_I(t));
    }
    for (int i = 1; i + 1 <= n; ++i) {
        double d2 = Is[(size_t)i + 1] - 2 * Is[(size_t)i] + Is[(size_t)i - 1];
        CHECK(d2 > 0.0);  // strictly convex on the interior
    }
    // lambda is the derivative of I: central finite difference check
    for (double t : {0.40, 0.44, 0.50}) {
        double h = 1e-6;
        double fd = (rf.rate_I(t + h) - rf.rate_I(t - h)) / (2 * h);
        CHECK(rf.rate_I_prime(t) == doctest::Approx(fd).epsilon(1e-5));
        CHECK(rf.rate_I_prime(t) == doctest::Approx(rf.lambda_of_t(t)).epsilon(1e-12));
    }
    // the tilt increases with the target mean
    double prev = -1;
    for (double t : ts) {
        double l = rf.lambda_of_t(t);
        CHECK(l >= prev - 1e-12);
        prev = l;
    }
}

TEST_CASE("mean map inverts the tilt") {
    RateFn rf(fig());
    const ColumnProfile& p = rf.prof();
    CHECK(rf.mean_map(0.0) == doctest::Approx(p.t_low).epsilon(1e-13));
    CHECK(rf.mean_map(1.0) == doctest::Approx(p.t_high).epsilon(1e-13));
    for (double t : {0.36, 0.42, 0.55, 0.65}) {
        CHECK(rf.mean_map(rf.lambda_of_t(t)) == doctest::Approx(t).epsilon(1e-9));
    }
}

TEST_CASE("kl identity holds for arbitrary column laws") {
    RateFn rf(fig());
    CHECK(kl_identity_check(rf, {0.5, 0.5}) <= 1e-10);
    CHECK(kl_identity_check(rf, {0.7, 0.3}) <= 1e-10);
    CHECK(kl_identity_check(rf, {2.0 / 3.0, 1.0 / 3.0}) <= 1e-10);
    CHECK(kl_identity_check(rf, rf.entropy_max_vector(0.42)) <= 1e-10);
}

TEST_CASE("entropy maximizer realizes the mean and the entropy") {
    RateFn rf(fig());
    const ColumnProfile& p = rf.prof();
    for (double t : {0.36, 0.42, 0.462098120373297}) {
        std::vector<double> q = rf.entropy_max_vector(t);
        REQUIRE(q.size() == p.counts.size());
        double sum = 0, mean = 0, ent = 0;
        for (size_t j = 0; j < q.size(); ++j) {
            sum += q[j];
            mean += q[j] * std::log((double)p.counts[j]);
            if (q[j] > 0) ent -= q[j] * std::log(q[j]);
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(mean == doctest::Approx(t).epsilon(1e-9));
        // H(Q*_t) = log M - I(t)
        CHECK(ent == doctest::Approx(std::log(2.0) - rf.rate_I(t)).epsilon(1e-9));
    }
    // at t_high the maximizer is the count distribution itself
    std::vector<double> q = rf.entropy_max_vector(p.t_high);
    CHECK(q[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-9));
    CHECK(q[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-9));
}

TEST_CASE("uniform fibres degenerate to a point") {
    RateFn rf(profile_from_counts(2, 3, {2, 2}));
    const ColumnProfile& p = rf.prof();
    CHECK(p.uniform_fibres);
    CHECK(p.t_low == doctest::Approx(p.t_high).epsilon(1e-15));
    CHECK(std::fabs(rf.rate_I(p.t_low)) <= 1e-12);
    CHECK(rf.lambda_of_t(p.t_low) == 0.0);
    CHECK_THROWS_AS(rf.rate_I(p.t_low + 0.01), domain_error);
}

TEST_CASE("exponent window brackets the admissible range") {
    RateFn rf(fig());
    const ColumnProfile& p = rf.prof();
    double logM = std::log(2.0);
    // t1(s) = (s - log M/log m) log n hits t_low at s_lower and t_max at s_upper
    double t1lo = (s_lower(rf) - logM / p.log_m) * p.log_n;
    double t1hi = (s_upper(rf) - logM / p.log_m) * p.log_n;
    CHECK(t1lo == doctest::Approx(p.t_low).epsilon(1e-12));
    CHECK(t1hi == doctest::Approx(p.t_high).epsilon(1e-12));
    CHECK(s_lower(rf) < s_upper(rf));
}

TEST_CASE("pressure identity chain holds midway") {
    RateFn rf(fig());
    double s = 0.5 * (s_lower(rf) + s_upper(rf));
    PressureIdentity pi = pressure_identity(rf, s);
    CHECK(pi.value == doctest::Approx(0.679193265991526).epsilon(1e-10));
    CHECK(std::fabs(pi.residual_entropy) <= 1e-10);
    CHECK(std::fabs(pi.residual_spectrum) <= 1e-9);
}
