#include "fdim/spectra.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "fdim/util.hpp"

namespace fracdim {

namespace {

// log sum over groups of R_i * N_i^e
double log_moment(const ColumnProfile& p, double e) {
    std::vector<double> terms;
    terms.reserve(p.groups.size());
    for (auto& g : p.groups)
        terms.push_back(std::log((double)g.mult) + e * std::log((double)g.value));
    return log_sum_exp(terms);
}

// mean of log N_i under weights R_i * N_i^e
double moment_mean(const ColumnProfile& p, double e) {
    double mx = -std::numeric_limits<double>::infinity();
    std::vector<double> lw(p.groups.size());
    for (size_t i = 0; i < p.groups.size(); ++i) {
        lw[i] = std::log((double)p.groups[i].mult) +
                e * std::log((double)p.groups[i].value);
        mx = std::max(mx, lw[i]);
    }
    double num = 0.0, den = 0.0;
    for (size_t i = 0; i < p.groups.size(); ++i) {
        double w = std::exp(lw[i] - mx);
        den += w;
        num += w * std::log((double)p.groups[i].value);
    }
    return num / den;
}

}  // namespace

double beta_exponent(const ColumnProfile& p, double xi) {
    double e = 1.0 / p.gamma + (1.0 - 1.0 / p.gamma) * xi;
    return (-xi * std::log((double)p.N) + log_moment(p, e)) / p.log_m;
}

double beta_exponent_prime(const ColumnProfile& p, double xi) {
    double e = 1.0 / p.gamma + (1.0 - 1.0 / p.gamma) * xi;
    return (-std::log((double)p.N) + (1.0 - 1.0 / p.gamma) * moment_mean(p, e)) /
           p.log_m;
}

SpectrumDomain spectrum_domain(const ColumnProfile& p) {
    double logN = std::log((double)p.N);
    double c = (1.0 - 1.0 / p.gamma) / p.log_m;
    return {logN / p.log_m - c * std::log((double)p.groups.front().value),
            logN / p.log_m - c * std::log((double)p.groups.back().value)};
}

double multifractal_spectrum(const ColumnProfile& p, double alpha) {
    SpectrumDomain dom = spectrum_domain(p);
    if (p.uniform_fibres) {
        if (std::fabs(alpha - dom.alpha_min) <= 1e-12)
            return dim_hausdorff(p);
        throw domain_error("spectrum: uniform fibres give a single exponent");
    }
    if (alpha <= dom.alpha_min || alpha >= dom.alpha_max)
        throw domain_error("spectrum: alpha outside the open exponent range");
    // beta' is increasing, so beta'(xi) + alpha has a single sign change
    double lo = -64.0, hi = 64.0;
    while (beta_exponent_prime(p, lo) + alpha >= 0.0) {
        lo *= 2.0;
        if (lo < -1e9) throw domain_error("spectrum: bracket blew up");
    }
    while (beta_exponent_prime(p, hi) + alpha <= 0.0) {
        hi *= 2.0;
        if (hi > 1e9) throw domain_error("spectrum: bracket blew up");
    }
    double xi = bisect([&](double x) { return beta_exponent_prime(p, x) + alpha; },
                       lo, hi, 1e-12, 300);
    return alpha * xi + beta_exponent(p, xi);
}

double lq_spectrum(const ColumnProfile& p, double q) {
    double logN = std::log((double)p.N);
    return logN / p.log_n - q * logN / p.log_m +
           (1.0 / p.log_m - 1.0 / p.log_n) * log_moment(p, q);
}

double lq_spectrum_beta_form(const ColumnProfile& p, double q) {
    double xi = (q * p.log_n - p.log_m) / (p.log_n - p.log_m);
    return (1.0 - p.log_m / p.log_n) * beta_exponent(p, xi);
}

EquivReport equivalent_intdim(const CarpetSpec& a, const CarpetSpec& b) {
    ColumnProfile pa = profile(a), pb = profile(b);
    if (pa.uniform_fibres || pb.uniform_fibres)
        throw domain_error("equivalence test: needs non-uniform fibres");

    EquivReport rep;
    GridReduction red = same_grid_reduction(a, b);
    if (!red.exponents) {
        rep.decision = EquivDecision::incomparable_grids;
        return rep;
    }
    auto [ka, kb] = *red.exponents;
    ColumnProfile qa = profile(iterate(a, ka));
    ColumnProfile qb = profile(iterate(b, kb));
    rep.common_m = qa.m;
    rep.common_n = qa.n;

    double gamma = qa.gamma;
    double log_ratio_M = std::log((double)qb.M) - std::log((double)qa.M);
    bool all_pass = qa.groups.size() == qb.groups.size();
    size_t rows = std::min(qa.groups.size(), qb.groups.size());
    for (size_t i = 0; i < rows; ++i) {
        EquivCheckRow row;
        row.i = (int)i + 1;
        const Group& ga = qa.groups[i];
        const Group& gb = qb.groups[i];
        row.N_ratio = (double)ga.value / (double)gb.value;
        row.R_ratio = (double)gb.mult / (double)ga.mult;
        row.target = std::exp(gamma * log_ratio_M);
        bool count_ok = std::fabs(std::log((double)ga.value) -
                                  std::log((double)gb.value) -
                                  gamma * log_ratio_M) <= 1e-12;
        bool mult_ok = gb.mult * qa.M == ga.mult * qb.M;
        row.pass = count_ok && mult_ok;
        all_pass = all_pass && row.pass;
        rep.checks.push_back(row);
    }
    rep.decision = all_pass ? EquivDecision::equivalent : EquivDecision::inequivalent;
    return rep;
}

std::string EquivReport::to_json() const {
    nlohmann::ordered_json j;
    switch (decision) {
        case EquivDecision::equivalent: j["decision"] = "equivalent"; break;
        case EquivDecision::inequivalent: j["decision"] = "inequivalent"; break;
        case EquivDecision::incomparable_grids:
            j["decision"] = "incomparable_grids";
            break;
    }
    j["common_grid"] = {{"m", common_m}, {"n", common_n}};
    j["checks"] = nlohmann::ordered_json::array();
    for (auto& c : checks)
        j["checks"].push_back({{"i", c.i},
                               {"N_ratio", c.N_ratio},
                               {"R_ratio", c.R_ratio},
                               {"target", c.target},
                               {"pass", c.pass}});
    return j.dump(2) + "\n";
}

HolderBound holder_bound(const std::vector<double>& thetas,
                         const std::vector<double>& values_a,
                         const std::vector<double>& values_b) {
    if (thetas.empty() || thetas.size() != values_a.size() ||
        thetas.size() != values_b.size())
        throw domain_error("holder bound: mismatched sample arrays");
    HolderBound hb{thetas[0], std::numeric_limits<double>::infinity()};
    for (size_t i = 0; i < thetas.size(); ++i) {
        if (!(values_b[i] > 0.0))
            throw domain_error("holder bound: target curve must be positive");
        double r = values_a[i] / values_b[i];
        if (r < hb.bound) {
            hb.bound = r;
            hb.theta_star = thetas[i];
        }
    }
    return hb;
}

HolderBound holder_bound(const DimCurve& a, const DimCurve& b) {
    if (a.thetas.size() != b.thetas.size())
        throw domain_error("holder bound: curves sampled on different grids");
    for (size_t i = 0; i < a.thetas.size(); ++i)
        if (std::fabs(a.thetas[i] - b.thetas[i]) > 1e-12)
            throw domain_error("holder bound: curves sampled on different grids");
    return holder_bound(a.thetas, a.values, b.values);
}

}  // namespace fracdim
