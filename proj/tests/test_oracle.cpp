#include <doctest.h>

#include <cmath>
#include <vector>

#include "fdim/carpet.hpp"
#include "fdim/intdim.hpp"
#include "fdim/oracle.hpp"
#include "fdim/rate.hpp"
#include "fdim/util.hpp"

using namespace fracdim;

static ColumnProfile fig() { return profile_from_counts(2, 3, {2, 1}); }

TEST_CASE("anisotropy floor") {
    ColumnProfile p = fig();
    CHECK(gamma_floor(p, 0) == 0);
    CHECK(gamma_floor(p, 1) == 1);
    CHECK(gamma_floor(p, 2) == 3);
    CHECK(gamma_floor(p, 40) == 63);
    for (int64_t k = 1; k <= 200; ++k) {
        int64_t d = gamma_floor(p, k) - gamma_floor(p, k - 1);
        CHECK(d >= 1);
        CHECK(d <= 2);  // 1 < gamma < 2
    }
    CHECK_THROWS_AS(gamma_floor(p, -1), domain_error);
    // rational exponent runs on exact integer arithmetic
    ColumnProfile q = profile_from_counts(4, 8, {2, 1});  // gamma = 3/2
    CHECK(gamma_floor(q, 2) == 3);
    CHECK(gamma_floor(q, 3) == 4);
    CHECK(gamma_floor(q, 5) == 7);
    CHECK(gamma_floor(q, 1000000000000LL) == 1500000000000LL);
}

TEST_CASE("approximate square counts") {
    ColumnProfile p = fig();
    CHECK(log_box_count(p, 1) == doctest::Approx(std::log(3.0)).epsilon(1e-14));
    CHECK(log_box_count(p, 2) == doctest::Approx(std::log(18.0)).epsilon(1e-14));
    CHECK_THROWS_AS(log_box_count(p, 0), domain_error);

    // the count slope misses the box dimension by an exact fractional defect
    double dimB = dim_box(p), logM = std::log(2.0);
    for (int64_t K : {40LL, 53LL}) {
        double slope = log_box_count(p, K) / ((double)K * p.log_n);
        double defect =
            ((double)gamma_floor(p, K) - p.gamma * (double)K) * logM / ((double)K * p.log_n);
        CHECK(std::fabs(slope - dimB - defect) <= 1e-12);
    }
    CHECK(log_box_count(p, 40) / (40.0 * p.log_n) - dimB ==
          doctest::Approx(-0.006285638124954529).epsilon(1e-10));
    for (int64_t K = 1; K <= 60; ++K) {
        double slope = log_box_count(p, K) / ((double)K * p.log_n);
        CHECK(std::fabs(slope - dimB) <= logM / ((double)K * p.log_n) + 1e-14);
    }
    // a near-resonant level pins the slope very tightly
    CHECK(std::fabs(log_box_count(p, 53) / (53.0 * p.log_n) - dimB) < 5e-5);
}

TEST_CASE("prefix cost bookkeeping") {
    ColumnProfile p = fig();
    std::vector<int> w{0, 1, 0, 0, 1, 0, 1, 1};
    CHECK(psi_log(p, w, 0, 1.36) == 0.0);
    for (int64_t j : {1LL, 3LL, 5LL}) {
        std::vector<int> tail(w.begin() + j, w.end());
        for (int64_t k = 0; (size_t)(j + k) <= w.size(); ++k)
            CHECK(psi_log(p, w, j + k, 1.36) ==
                  doctest::Approx(psi_log(p, w, j, 1.36) + psi_log(p, tail, k, 1.36))
                      .epsilon(1e-12));
    }
    CHECK_THROWS_AS(psi_log(p, w, 9, 1.36), domain_error);
    CHECK_THROWS_AS(psi_log(p, std::vector<int>{0, 2}, 2, 1.36), domain_error);

    // sign of the full-word cost encodes the digit-average threshold
    double s = 1.36;
    double t1 = (s - 1.0) * p.log_n;  // log M / log m = 1 here
    for (int mask = 0; mask < 256; ++mask) {
        std::vector<int> word(8);
        double sum = 0;
        for (int b = 0; b < 8; ++b) {
            word[b] = (mask >> b) & 1;
            sum += std::log((double)p.counts[word[b]]);
        }
        double avg = sum / 8.0;
        if (std::fabs(avg - t1) < 1e-12) continue;
        double psi = psi_log(p, word, 8, s);
        CHECK((psi <= 0.0) == (avg <= t1));
    }
}

TEST_CASE("stopping-time pressure") {
    ColumnProfile p = fig();
    double s = 1.36;
    double step = p.gamma * std::log(2.0) - s * p.log_n;
    double hand = std::log(std::min(1.0, std::exp(step + std::log(2.0))) +
                           std::min(1.0, std::exp(step)));
    CHECK(pressure_psi(p, 1, s) == doctest::Approx(hand).epsilon(1e-12));
    CHECK(pressure_psi(p, 1, s) == doctest::Approx(0.51482342070484943).epsilon(1e-12));

    // per-symbol pressure approaches the tilted-entropy value from below
    RateFn rf(p);
    double s1 = 1.355;
    double ref = std::log(2.0) - rf.rate_I(t_sequence(rf, s1, 1).back());
    std::vector<double> gaps;
    for (int64_t J : {5LL, 10LL, 15LL, 20LL})
        gaps.push_back(pressure_psi(p, J, s1) / (double)J - ref);
    CHECK(gaps[0] == doctest::Approx(-0.090054412945981821).epsilon(1e-9));
    CHECK(gaps[3] == doctest::Approx(-0.047552321196383418).epsilon(1e-9));
    for (size_t i = 0; i < gaps.size(); ++i) {
        CHECK(gaps[i] < 0.0);
        if (i) CHECK(gaps[i] > gaps[i - 1]);
    }

    // the word sum is supermultiplicative, and capped by dropping a block
    for (double sv : {1.30, 1.355}) {
        for (auto [a, b] : std::vector<std::pair<int64_t, int64_t>>{{3, 4}, {5, 5}, {8, 8}}) {
            double whole = pressure_psi(p, a + b, sv);
            double pa = pressure_psi(p, a, sv), pb = pressure_psi(p, b, sv);
            CHECK(whole - pa - pb >= -1e-12);
            CHECK(whole <= pa + (double)b * std::log(2.0) + 1e-12);
        }
    }
    CHECK_THROWS_AS(pressure_psi(p, 25, s1), budget_error);
    CHECK_THROWS_AS(pressure_psi(p, 0, s1), domain_error);
}

TEST_CASE("column-average counting, typed versus direct") {
    ColumnProfile p = fig();
    for (int64_t J : {4LL, 6LL, 8LL, 10LL, 12LL})
        for (double t : {0.30, 0.40, 0.462, 0.60})
            CHECK(count_below(p, J, t) ==
                  doctest::Approx(count_below_direct(p, J, t)).epsilon(1e-12));
    CHECK(count_below(p, 10, 0.4) == doctest::Approx(9.440260907569419).epsilon(1e-12));
    CHECK(count_below(p, 5, 0.0) == 0.0);  // only the single-map columns survive
    CHECK(count_below(p, 8, std::log(2.0)) ==
          doctest::Approx(8.0 * std::log(3.0)).epsilon(1e-14));  // everything counts
    CHECK_THROWS_AS(count_below_direct(p, 60, 0.4), budget_error);
}

TEST_CASE("column-average counting rate") {
    ColumnProfile p = fig();
    CHECK(count_below_rate(p, 0.4) == doctest::Approx(1.0812176252566275).epsilon(1e-12));
    // at and past the mean the rate saturates at log N
    CHECK(count_below_rate(p, 0.6) == doctest::Approx(std::log(3.0)).epsilon(1e-12));
    CHECK(count_below_rate(p, 5.0) == doctest::Approx(std::log(3.0)).epsilon(1e-12));
    // finite-J counts approach the rate within the multinomial envelope
    for (int64_t J : {10LL, 20LL, 40LL, 80LL}) {
        double bound = (double)p.M * std::log((double)J + 1.0) / (double)J;
        for (double t : {0.36, 0.40, 0.43})
            CHECK(std::fabs(count_below(p, J, t) / (double)J - count_below_rate(p, t)) <=
                  bound);
    }
}

TEST_CASE("two-scale cover cost") {
    ColumnProfile p = fig();
    double dimB = dim_box(p);
    // with no room to descend the cost is the pure stopping cost
    double stop = log_box_count(p, 16) - dimB * 16.0 * p.log_n;
    CHECK(two_scale_log_cost(p, 1.0, 16, dimB) == doctest::Approx(stop).epsilon(1e-14));
    CHECK(two_scale_log_cost(p, 1.0, 16, dimB) ==
          doctest::Approx(-0.24911710469112336).epsilon(1e-12));
    CHECK(dp_log_cost(p, 1.0, 16, dimB) == doctest::Approx(stop).epsilon(1e-14));
    CHECK_THROWS_AS(two_scale_log_cost(p, 0.7, 12, 1.36, 4), budget_error);
}

TEST_CASE("free-stopping cover never beats the two-scale cover") {
    ColumnProfile p = fig();
    for (double s : {1.30, 1.34, 1.36, 1.40})
        for (double theta : {0.7, 0.9})
            CHECK(dp_log_cost(p, theta, 12, s) <=
                  two_scale_log_cost(p, theta, 12, s) + 1e-12);
    CHECK(dp_partition_check(p, 0.7, 12, 1.36) <= 1e-9);
    CHECK_THROWS_AS(dp_log_cost(p, 0.7, 12, 1.36, 16), budget_error);
    CHECK_THROWS_AS(dp_log_cost(p, 1.5, 12, 1.36), domain_error);
    CHECK_THROWS_AS(dp_log_cost(p, 0.7, 0, 1.36), domain_error);
}

TEST_CASE("cover cost trend brackets the dimension of the uniform carpet") {
    ColumnProfile u = profile_from_counts(2, 3, {2, 2});
    double d = dim_box(u);
    CHECK(d == doctest::Approx(1.6309297535714573).epsilon(1e-14));
    // above the dimension the cost sinks with depth, below it climbs
    double hi10 = dp_log_cost(u, 0.7, 10, d + 0.02);
    double hi16 = dp_log_cost(u, 0.7, 16, d + 0.02);
    double lo10 = dp_log_cost(u, 0.7, 10, d - 0.02);
    double lo16 = dp_log_cost(u, 0.7, 16, d - 0.02);
    CHECK(hi10 == doctest::Approx(-0.80863763601553984).epsilon(1e-9));
    CHECK(hi16 == doctest::Approx(-1.0858556186742447).epsilon(1e-9));
    CHECK(lo10 == doctest::Approx(-0.36919272054829833).epsilon(1e-9));
    CHECK(lo16 == doctest::Approx(-0.28105403465213641).epsilon(1e-9));
    CHECK(hi16 < hi10);
    CHECK(lo16 > lo10);
    // below the dimension the cost keeps a uniform mass floor
    for (int64_t K = 8; K <= 16; ++K)
        CHECK(dp_log_cost(u, 0.7, K, d - 0.01) >= -2.0 * std::log(4.0));
}

TEST_CASE("cost-root bisection") {
    double r = critical_s([](double s) { return 2.5 * (1.4 - s); }, 1.0, 1.6);
    CHECK(r == doctest::Approx(1.4).epsilon(1e-9));
    CHECK_THROWS(critical_s([](double s) { return 1.0 + s; }, 0.0, 1.0));
}
