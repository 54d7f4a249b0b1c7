#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "fdim/carpet.hpp"

namespace fracdim {

// floor(gamma * k); exact integer arithmetic when gamma is rational
int64_t gamma_floor(const ColumnProfile& p, int64_t k);

// log of the number of level-K approximate squares, N^K * M^(gamma(K)-K)
double log_box_count(const ColumnProfile& p, int64_t K);

// log of the k-th prefix cost of a column word (entries are 0-based
// indices into p.counts); k = 0 gives log 1 = 0
double psi_log(const ColumnProfile& p, const std::vector<int>& word, int64_t k,
               double s);

// log of the sum over all M^J column words of the minimal prefix cost
double pressure_psi(const ColumnProfile& p, int64_t J, double s,
                    int64_t budget = int64_t(1) << 24);

// log-count of map words of length J whose column average is at most t,
// summed over column types with exact multinomial weights
double count_below(const ColumnProfile& p, int64_t J, double t,
                   int64_t budget = int64_t(1) << 24);

// same count by direct enumeration of all column words (slow cross-check)
double count_below_direct(const ColumnProfile& p, int64_t J, double t,
                          int64_t budget = int64_t(1) << 24);

// growth exponent the count should match: min(t, t_mean) + log M - I(min(..))
double count_below_rate(const ColumnProfile& p, double t);

// log s-cost of covering every level-K approximate square either by itself
// or by all of its descendants at level floor(K/theta)
double two_scale_log_cost(const ColumnProfile& p, double theta, int64_t K,
                          double s, int64_t budget = int64_t(1) << 24);

// log of the minimal s-cost over all covers by approximate squares with
// levels between K and floor(K/theta), by exact dynamic programming
double dp_log_cost(const ColumnProfile& p, double theta, int64_t K, double s,
                   int64_t budget = int64_t(1) << 26);

// numeric witness that the DP's children exactly tile each parent square:
// max deviation of the level-wise square counts and of the selected cover's
// coverage fraction from their exact values (0 up to rounding)
double dp_partition_check(const ColumnProfile& p, double theta, int64_t K,
                          double s, int64_t budget = int64_t(1) << 26);

// root of a strictly decreasing log-cost in s on [lo, hi]
double critical_s(const std::function<double(double)>& log_cost, double lo,
                  double hi, double xtol = 1e-10);

}  // namespace fracdim
