#include "fdim/carpet.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#include "fdim/util.hpp"

namespace fracdim {

void CarpetSpec::normalize() {
    std::sort(cells.begin(), cells.end());
    cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
}

void CarpetSpec::validate() const {
    if (m < 2) throw domain_error("carpet: need m >= 2");
    if (n <= m) throw domain_error("carpet: need n > m");
    if (cells.empty()) throw domain_error("carpet: no occupied cells");
    for (auto& [c, r] : cells) {
        if (c < 1 || c > m || r < 1 || r > n)
            throw domain_error("carpet: cell outside the m x n grid");
    }
    for (size_t i = 1; i < cells.size(); ++i)
        if (cells[i] == cells[i - 1]) throw domain_error("carpet: duplicate cell");
}

namespace {

int64_t parse_dim(const std::string& tok, const char* what) {
    if (tok.empty()) throw parse_error(std::string("grid header: empty ") + what);
    if (tok.size() > 1 && tok[0] == '0')
        throw parse_error(std::string("grid header: leading zero in ") + what);
    int64_t v = 0;
    for (char ch : tok) {
        if (ch < '0' || ch > '9')
            throw parse_error(std::string("grid header: non-digit in ") + what);
        v = v * 10 + (ch - '0');
        if (v > (int64_t)1 << 40) throw parse_error("grid header: dimension too large");
    }
    return v;
}

}  // namespace

CarpetSpec parse_carpet(const std::string& text) {
    if (text.empty() || text.back() != '\n')
        throw parse_error("grid file: missing trailing newline");
    std::vector<std::string> lines;
    size_t pos = 0;
    while (pos < text.size()) {
        size_t nl = text.find('\n', pos);
        lines.push_back(text.substr(pos, nl - pos));
        pos = nl + 1;
    }
    if (lines.empty()) throw parse_error("grid file: empty");
    const std::string& head = lines[0];
    size_t sp = head.find(' ');
    if (sp == std::string::npos || head.find(' ', sp + 1) != std::string::npos)
        throw parse_error("grid header: expected \"m n\"");
    CarpetSpec spec;
    spec.m = parse_dim(head.substr(0, sp), "m");
    spec.n = parse_dim(head.substr(sp + 1), "n");
    if (spec.m < 2 || spec.n <= spec.m)
        throw parse_error("grid header: need 2 <= m < n");
    if ((int64_t)lines.size() != spec.n + 1)
        throw parse_error("grid file: expected exactly n row lines");
    for (int64_t j = 1; j <= spec.n; ++j) {
        const std::string& row = lines[j];
        if ((int64_t)row.size() != spec.m)
            throw parse_error("grid file: row length differs from m");
        int64_t r = spec.n + 1 - j;  // top line of the file is the highest row
        for (int64_t i = 0; i < spec.m; ++i) {
            char ch = row[(size_t)i];
            if (ch == '1')
                spec.cells.emplace_back(i + 1, r);
            else if (ch != '0')
                throw parse_error("grid file: rows must be '0'/'1' only");
        }
    }
    spec.normalize();
    spec.validate();
    return spec;
}

CarpetSpec read_carpet_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw parse_error("cannot open grid file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_carpet(ss.str());
}

std::string serialize_carpet(const CarpetSpec& spec) {
    spec.validate();
    std::string out = std::to_string(spec.m) + " " + std::to_string(spec.n) + "\n";
    std::vector<std::string> rows((size_t)spec.n, std::string((size_t)spec.m, '0'));
    for (auto& [c, r] : spec.cells) rows[(size_t)(r - 1)][(size_t)(c - 1)] = '1';
    for (int64_t r = spec.n; r >= 1; --r) {
        out += rows[(size_t)(r - 1)];
        out += '\n';
    }
    return out;
}

ColumnProfile profile_from_counts(int64_t m, int64_t n, std::vector<int64_t> counts) {
    if (m < 2 || n <= m) throw domain_error("profile: need 2 <= m < n");
    if (counts.empty()) throw domain_error("profile: no non-empty columns");
    if ((int64_t)counts.size() > m) throw domain_error("profile: more columns than m");
    std::sort(counts.begin(), counts.end(), std::greater<int64_t>());
    if (counts.back() < 1) throw domain_error("profile: empty column in counts");
    if (counts.front() > n) throw domain_error("profile: column count exceeds n");

    ColumnProfile p;
    p.m = m;
    p.n = n;
    p.log_m = std::log((double)m);
    p.log_n = std::log((double)n);
    p.gamma = p.log_n / p.log_m;
    p.counts = std::move(counts);
    p.M = (int64_t)p.counts.size();
    p.N = std::accumulate(p.counts.begin(), p.counts.end(), (int64_t)0);
    for (int64_t c : p.counts) {
        if (!p.groups.empty() && p.groups.back().value == c)
            ++p.groups.back().mult;
        else
            p.groups.push_back({c, 1});
    }
    double logN = std::log((double)p.N);
    double tl = 0.0, H = 0.0;
    for (int64_t c : p.counts) {
        double lc = std::log((double)c);
        tl += lc;
        double q = (double)c / (double)p.N;
        H -= q * std::log(q);
    }
    p.t_low = tl / (double)p.M;
    p.t_high = logN - H;
    p.t_max = std::log((double)p.counts.front());
    p.uniform_fibres = (p.groups.size() == 1);
    return p;
}

ColumnProfile profile(const CarpetSpec& spec) {
    spec.validate();
    std::map<int64_t, int64_t> per_col;
    for (auto& [c, r] : spec.cells) ++per_col[c];
    std::vector<int64_t> counts;
    counts.reserve(per_col.size());
    for (auto& [c, k] : per_col) counts.push_back(k);
    return profile_from_counts(spec.m, spec.n, std::move(counts));
}

CarpetSpec carpet_from_counts(int64_t m, int64_t n, const std::vector<int64_t>& counts) {
    CarpetSpec spec;
    spec.m = m;
    spec.n = n;
    for (size_t j = 0; j < counts.size(); ++j)
        for (int64_t r = 1; r <= counts[j]; ++r)
            spec.cells.emplace_back((int64_t)j + 1, r);
    spec.normalize();
    spec.validate();
    return spec;
}

CarpetSpec iterate(const CarpetSpec& spec, int k, int64_t cell_budget) {
    spec.validate();
    if (k < 1) throw domain_error("iterate: need k >= 1");
    double cells_needed = std::pow((double)spec.cells.size(), (double)k);
    if (cells_needed > (double)cell_budget)
        throw budget_error("iterate: cell count would exceed the budget");
    // grid dimensions must stay in exact integer range
    if ((double)k * std::log2((double)spec.n) > 60.0)
        throw budget_error("iterate: grid dimension overflows");

    CarpetSpec out;
    out.m = 1;
    out.n = 1;
    out.cells = {{1, 1}};
    for (int step = 0; step < k; ++step) {
        CarpetSpec next;
        next.m = out.m * spec.m;
        next.n = out.n * spec.n;
        next.cells.reserve(out.cells.size() * spec.cells.size());
        for (auto& [c, r] : out.cells)
            for (auto& [cb, rb] : spec.cells)
                next.cells.emplace_back((c - 1) * spec.m + cb, (r - 1) * spec.n + rb);
        out = std::move(next);
    }
    out.normalize();
    out.validate();
    return out;
}

namespace {

std::map<int64_t, int> factorize(int64_t v) {
    std::map<int64_t, int> f;
    for (int64_t p = 2; p * p <= v; ++p)
        while (v % p == 0) {
            ++f[p];
            v /= p;
        }
    if (v > 1) ++f[v];
    return f;
}

// merge the exponent-ratio constraint k_a * ea = k_b * eb into u/v (lowest terms)
bool merge_ratio(const std::map<int64_t, int>& fa, const std::map<int64_t, int>& fb,
                 int64_t& u, int64_t& v) {
    if (fa.size() != fb.size()) return false;
    for (auto& [p, ea] : fa) {
        auto it = fb.find(p);
        if (it == fb.end()) return false;
        int eb = it->second;
        int64_t nu = eb, nv = ea;
        int64_t g = std::gcd(nu, nv);
        nu /= g;
        nv /= g;
        if (u == 0) {
            u = nu;
            v = nv;
        } else if (u != nu || v != nv) {
            return false;
        }
    }
    return true;
}

}  // namespace

GridReduction same_grid_reduction(const CarpetSpec& a, const CarpetSpec& b,
                                  int exponent_bound) {
    a.validate();
    b.validate();
    GridReduction res;
    int64_t u = 0, v = 0;
    if (!merge_ratio(factorize(a.m), factorize(b.m), u, v)) return res;
    if (!merge_ratio(factorize(a.n), factorize(b.n), u, v)) return res;
    if (u > exponent_bound || v > exponent_bound) {
        res.bound_reached = true;
        return res;
    }
    res.exponents = std::make_pair((int)u, (int)v);
    return res;
}

}  // namespace fracdim
