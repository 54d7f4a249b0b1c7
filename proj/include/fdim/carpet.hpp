#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace fracdim {

// A self-affine carpet on the m x n grid (m < n): the set of occupied cells,
// each cell given as (column, row), both 1-based, column in 1..m, row in 1..n.
struct CarpetSpec {
    int64_t m = 0;
    int64_t n = 0;
    std::vector<std::pair<int64_t, int64_t>> cells;  // sorted, unique

    void normalize();        // sort cells, drop duplicates
    void validate() const;   // throws domain_error on a malformed spec
};

// run of equal column counts
struct Group {
    int64_t value = 0;  // the distinct count
    int64_t mult = 0;   // how many columns share it
};

// Everything the dimension theory needs is a function of the column counts.
struct ColumnProfile {
    int64_t m = 0, n = 0;
    double log_m = 0, log_n = 0;
    double gamma = 0;              // log n / log m
    int64_t M = 0;                 // number of non-empty columns
    int64_t N = 0;                 // total number of cells
    std::vector<int64_t> counts;   // per non-empty column, descending
    std::vector<Group> groups;     // distinct counts with multiplicities, descending
    double t_low = 0;              // mean of log counts
    double t_high = 0;             // log N - entropy of the count distribution
    double t_max = 0;              // largest log count
    bool uniform_fibres = false;   // all counts equal
};

// strict grid-file codec; format is byte-exact and round-trips
CarpetSpec parse_carpet(const std::string& text);
CarpetSpec read_carpet_file(const std::string& path);
std::string serialize_carpet(const CarpetSpec& spec);

ColumnProfile profile(const CarpetSpec& spec);
ColumnProfile profile_from_counts(int64_t m, int64_t n, std::vector<int64_t> counts);

// convenience: a carpet whose column j holds counts[j] cells stacked from row 1
CarpetSpec carpet_from_counts(int64_t m, int64_t n, const std::vector<int64_t>& counts);

// k-fold composition: the carpet of all k-step cell words on the m^k x n^k grid
CarpetSpec iterate(const CarpetSpec& spec, int k, int64_t cell_budget = (1 << 24));

// Minimal exponents (ka, kb) with m_a^ka = m_b^kb and n_a^ka = n_b^kb, if any.
struct GridReduction {
    std::optional<std::pair<int, int>> exponents;
    bool bound_reached = false;  // a solution exists but overflows the exponent bound
};
GridReduction same_grid_reduction(const CarpetSpec& a, const CarpetSpec& b,
                                  int exponent_bound = 32);

}  // namespace fracdim
