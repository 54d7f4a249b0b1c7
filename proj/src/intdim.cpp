#include "fdim/intdim.hpp"

#include <algorithm>
#include <cmath>

#include "fdim/util.hpp"

namespace fracdim {

double dim_hausdorff(const ColumnProfile& p) {
    // log-domain sum of N_i^(1/gamma) over columns
    std::vector<double> terms;
    terms.reserve(p.groups.size());
    for (auto& g : p.groups)
        terms.push_back(std::log((double)g.mult) +
                        std::log((double)g.value) / p.gamma);
    return log_sum_exp(terms) / p.log_m;
}

double dim_box(const ColumnProfile& p) {
    double logM = std::log((double)p.M);
    return std::log((double)p.N) / p.log_n + (1.0 - 1.0 / p.gamma) * logM / p.log_m;
}

int window_index(const ColumnProfile& p, double theta) {
    if (!(theta > 0.0) || theta > 1.0)
        throw domain_error("window index: theta must lie in (0, 1]");
    double log_gamma = std::log(p.gamma);
    double x = -std::log(theta) / log_gamma;
    long long k = std::llround(x);
    if (k >= 0 && std::fabs(theta - std::pow(p.gamma, (double)-k)) <= 1e-12)
        return (int)k + 1;  // boundary values belong to the deeper window
    return 1 + (int)std::floor(x);
}

std::vector<double> t_sequence(const RateFn& rf, double s, int L) {
    if (L < 1) throw domain_error("t sequence: need L >= 1");
    const ColumnProfile& p = rf.prof();
    double logM = std::log((double)p.M);
    double t1 = (s - logM / p.log_m) * p.log_n;
    std::vector<double> ts;
    ts.reserve((size_t)L);
    ts.push_back(t1);
    for (int l = 1; l < L; ++l) ts.push_back(t1 + p.gamma * rf.rate_I(ts.back()));
    // the deepest value must itself be admissible for the rate function
    if (ts.back() < p.t_low - 1e-12 || ts.back() > p.t_max)
        throw domain_error("t sequence: iterate left the admissible range");
    return ts;
}

double T_map(const RateFn& rf, double s, double t) {
    const ColumnProfile& p = rf.prof();
    double logM = std::log((double)p.M);
    return (s - logM / p.log_m) * p.log_n + p.gamma * rf.rate_I(t);
}

namespace {

double eval_G(const RateFn& rf, double theta, double s, int L) {
    const ColumnProfile& p = rf.prof();
    double logM = std::log((double)p.M);
    double logN = std::log((double)p.N);
    std::vector<double> ts = t_sequence(rf, s, L);
    double tL = ts.back();
    double gL = std::pow(p.gamma, (double)L);
    double gLm1 = gL / p.gamma;
    return gL * theta * logN - (gL * theta - 1.0) * tL +
           p.gamma * (1.0 - gLm1 * theta) * (logM - rf.rate_I(tL)) - s * p.log_n;
}

// Large s can push the deep iterates out of the rate function's domain;
// those s lie strictly beyond the root, so treat them as G = -inf when
// locating the sign change.
double eval_G_ext(const RateFn& rf, double theta, double s, int L) {
    try {
        return eval_G(rf, theta, s, L);
    } catch (const domain_error&) {
        return -std::numeric_limits<double>::infinity();
    }
}

}  // namespace

double main_equation_G(const RateFn& rf, double theta, double s) {
    return eval_G(rf, theta, s, window_index(rf.prof(), theta));
}

double intermediate_dim(const RateFn& rf, double theta) {
    const ColumnProfile& p = rf.prof();
    if (!(theta >= 1e-8) || theta > 1.0)
        throw domain_error("intermediate dim: theta must lie in [1e-8, 1]");
    if (p.uniform_fibres) return dim_hausdorff(p);
    double dB = dim_box(p);
    if (std::fabs(theta - 1.0) <= 1e-12) return dB;
    double dH = dim_hausdorff(p);
    int L = window_index(p, theta);
    double lo = dH + 1e-14, hi = dB;
    if (!(eval_G_ext(rf, theta, lo, L) > 0.0))
        throw domain_error("intermediate dim: no sign change at the lower end");
    return bisect([&](double s) { return eval_G_ext(rf, theta, s, L); }, lo, hi,
                  1e-12, 100);
}

double intermediate_dim(const ColumnProfile& p, double theta) {
    RateFn rf(p);
    return intermediate_dim(rf, theta);
}

double intermediate_dim_scan(const RateFn& rf, double theta, int64_t npoints) {
    const ColumnProfile& p = rf.prof();
    if (npoints < 2) throw domain_error("scan: need at least two points");
    if (p.uniform_fibres) return dim_hausdorff(p);
    double dH = dim_hausdorff(p), dB = dim_box(p);
    if (std::fabs(theta - 1.0) <= 1e-12) return dB;
    int L = window_index(p, theta);
    double lo = dH + 1e-14;
    double step = (dB - lo) / (double)(npoints - 1);
    double prev = lo;
    for (int64_t i = 1; i < npoints; ++i) {
        double s = lo + step * (double)i;
        if (!(eval_G_ext(rf, theta, s, L) > 0.0)) return 0.5 * (prev + s);
        prev = s;
    }
    return dB;
}

double reduced_window1_root(const RateFn& rf, double theta) {
    const ColumnProfile& p = rf.prof();
    if (window_index(p, theta) != 1)
        throw domain_error("reduced equation: theta must lie in the first window");
    double dH = dim_hausdorff(p), dB = dim_box(p);
    if (std::fabs(theta - 1.0) <= 1e-12) return dB;
    auto F = [&](double s) -> double {
        try {
            double t1 = t_sequence(rf, s, 1)[0];
            return dB - (1.0 / theta - 1.0) * rf.rate_I(t1) / p.log_n - s;
        } catch (const domain_error&) {
            return -std::numeric_limits<double>::infinity();
        }
    };
    return bisect(F, dH + 1e-14, dB, 1e-12, 100);
}

double reduced_boundary_root(const RateFn& rf, int L) {
    const ColumnProfile& p = rf.prof();
    if (L < 2) throw domain_error("reduced equation: need L >= 2");
    double dH = dim_hausdorff(p), dB = dim_box(p);
    auto F = [&](double s) -> double {
        try {
            double tprev = t_sequence(rf, s, L - 1).back();
            return dB - (1.0 / p.log_m) * (1.0 - 1.0 / p.gamma) * rf.rate_I(tprev) - s;
        } catch (const domain_error&) {
            return -std::numeric_limits<double>::infinity();
        }
    };
    return bisect(F, dH + 1e-14, dB, 1e-12, 100);
}

namespace {

// A_L built from the tilts at t_1..t_{L-1}
double chain_factor(const std::vector<double>& tilts, double gamma, int L) {
    double A = 1.0, acc = 1.0;
    for (int l = 1; l <= L - 1; ++l) {
        acc *= tilts[(size_t)(L - l - 1)];
        A += std::pow(gamma, (double)l) * acc;
    }
    return A;
}

}  // namespace

std::pair<double, double> dim_derivatives(const RateFn& rf, double theta) {
    const ColumnProfile& p = rf.prof();
    if (!(theta >= 1e-8) || theta > 1.0)
        throw domain_error("dim derivatives: theta must lie in [1e-8, 1]");
    if (p.uniform_fibres) return {0.0, 0.0};
    double logM = std::log((double)p.M);
    double logN = std::log((double)p.N);
    double s = intermediate_dim(rf, theta);

    double log_gamma = std::log(p.gamma);
    long long k = std::llround(-std::log(theta) / log_gamma);
    bool boundary = k >= 1 && std::fabs(theta - std::pow(p.gamma, (double)-k)) <= 1e-12;

    if (boundary) {
        std::vector<double> ts = t_sequence(rf, s, (int)k + 1);
        std::vector<double> tilts(ts.size());
        for (size_t i = 0; i < ts.size(); ++i) tilts[i] = rf.lambda_of_t(ts[i]);
        auto f = [&](double t) { return logN - t - logM + rf.rate_I(t); };
        double A_lo = chain_factor(tilts, p.gamma, (int)k);
        double A_hi = chain_factor(tilts, p.gamma, (int)k + 1);
        double left = std::pow(p.gamma, (double)k + 1.0) / p.log_n *
                      f(ts[(size_t)k]) / (1.0 + (p.gamma - 1.0) * A_hi);
        double right = std::pow(p.gamma, (double)k) / p.log_n *
                       f(ts[(size_t)k - 1]) /
                       (1.0 + (p.gamma - 1.0) * tilts[(size_t)k - 1] * A_lo);
        return {left, right};
    }

    int L = window_index(p, theta);
    std::vector<double> ts = t_sequence(rf, s, L);
    std::vector<double> tilts(ts.size());
    for (size_t i = 0; i < ts.size(); ++i) tilts[i] = rf.lambda_of_t(ts[i]);
    double tL = ts.back();
    double gL = std::pow(p.gamma, (double)L);
    double gLm1 = gL / p.gamma;
    double fL = logN - tL - logM + rf.rate_I(tL);
    double gfac = gL * theta - 1.0 + p.gamma * (1.0 - gLm1 * theta) * tilts.back();
    double A = chain_factor(tilts, p.gamma, L);
    double d = gL / p.log_n * fL / (1.0 + gfac * A);
    return {d, d};
}

double t_prime(const RateFn& rf) { return rf.mean_map(1.0 / rf.prof().gamma); }

double t_star(const RateFn& rf) {
    const ColumnProfile& p = rf.prof();
    if (p.uniform_fibres) throw domain_error("t*: needs non-uniform fibres");
    double c = (dim_box(p) - dim_hausdorff(p)) * p.log_m / (1.0 - 1.0 / p.gamma);
    return bisect([&](double t) { return rf.rate_I(t) - c; }, p.t_low, p.t_max,
                  1e-13, 300);
}

double transition_gap_limit(const RateFn& rf) {
    const ColumnProfile& p = rf.prof();
    double logM = std::log((double)p.M);
    double logN = std::log((double)p.N);
    double ts = t_star(rf);
    double tT = T_map(rf, dim_hausdorff(p), ts);
    auto f = [&](double t) { return logN - t - logM + rf.rate_I(t); };
    return f(ts) / f(tT);
}

DimCurve curve(const RateFn& rf, const CurveConfig& cfg) {
    const ColumnProfile& p = rf.prof();
    if (!(cfg.theta_min >= 1e-8) || !(cfg.theta_min < cfg.theta_max) ||
        cfg.theta_max > 1.0)
        throw domain_error("curve: need 1e-8 <= theta_min < theta_max <= 1");
    if (cfg.count < 2) throw domain_error("curve: need at least two samples");

    DimCurve c;
    c.profile = p;
    std::vector<double> grid((size_t)cfg.count);
    double step = (cfg.theta_max - cfg.theta_min) / (double)(cfg.count - 1);
    for (int i = 0; i < cfg.count; ++i)
        grid[(size_t)i] = cfg.theta_min + step * (double)i;
    grid.back() = cfg.theta_max;

    if (cfg.include_transitions) {
        for (int L = 1;; ++L) {
            double tr = std::pow(p.gamma, (double)-L);
            if (tr <= cfg.theta_min) break;
            if (tr >= cfg.theta_max) continue;
            c.transitions.emplace_back(L, tr);
            // snap any grid point that nearly coincides, otherwise insert
            bool snapped = false;
            for (double& g : grid)
                if (std::fabs(g - tr) <= 1e-9) {
                    g = tr;
                    snapped = true;
                    break;
                }
            if (!snapped) grid.push_back(tr);
        }
        std::sort(grid.begin(), grid.end());
        std::sort(c.transitions.begin(), c.transitions.end());
    }

    for (double th : grid) {
        double s = intermediate_dim(rf, th);
        int L = window_index(p, th);
        // uniform fibres: the curve is flat and the orbit sits at t_low
        double tl = p.uniform_fibres ? p.t_low : t_sequence(rf, s, L).back();
        auto [dm, dp] = dim_derivatives(rf, th);
        c.thetas.push_back(th);
        c.values.push_back(s);
        c.L.push_back(L);
        c.t_last.push_back(tl);
        c.d_minus.push_back(dm);
        c.d_plus.push_back(dp);
    }
    return c;
}

std::string curve_to_csv(const DimCurve& c) {
    std::string out = "theta,dim,L,tL,d_minus,d_plus\n";
    if (c.profile.uniform_fibres)
        out += "# uniform fibres: curve is constant\n";
    for (auto& [L, tr] : c.transitions)
        out += "# transition gamma^-" + std::to_string(L) + "=" + fmt_g(tr) + "\n";
    for (size_t i = 0; i < c.thetas.size(); ++i) {
        out += fmt_g(c.thetas[i]) + "," + fmt_g(c.values[i]) + "," +
               std::to_string(c.L[i]) + "," + fmt_g(c.t_last[i]) + "," +
               fmt_g(c.d_minus[i]) + "," + fmt_g(c.d_plus[i]) + "\n";
    }
    return out;
}

}  // namespace fracdim
