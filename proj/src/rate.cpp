#include "fdim/rate.hpp"

#include <algorithm>
#include <cmath>

#include "fdim/spectra.hpp"
#include "fdim/util.hpp"

namespace fracdim {

RateFn::RateFn(ColumnProfile p) : p_(std::move(p)) {
    for (auto& g : p_.groups) {
        log_val_.push_back(std::log((double)g.value));
        log_mult_.push_back(std::log((double)g.mult));
    }
    lambda_hi_seed_ = 4.0;
}

double RateFn::mean_map(double lambda) const {
    double mx = -std::numeric_limits<double>::infinity();
    size_t k = log_val_.size();
    for (size_t i = 0; i < k; ++i)
        mx = std::max(mx, lambda * log_val_[i] + log_mult_[i]);
    double num = 0.0, den = 0.0;
    for (size_t i = 0; i < k; ++i) {
        double w = std::exp(lambda * log_val_[i] + log_mult_[i] - mx);
        den += w;
        num += w * log_val_[i];
    }
    return num / den;
}

double RateFn::log_mgf(double lambda) const {
    std::vector<double> terms(log_val_.size());
    for (size_t i = 0; i < terms.size(); ++i)
        terms[i] = lambda * log_val_[i] + log_mult_[i];
    return log_sum_exp(terms) - std::log((double)p_.M);
}

double RateFn::lambda_of_t(double t) const {
    if (p_.uniform_fibres) {
        if (std::fabs(t - p_.t_low) <= 1e-12) return 0.0;
        throw domain_error("rate: uniform fibres, t must equal the single mean");
    }
    if (t < p_.t_low - 1e-12) throw domain_error("rate: t below the mean range");
    if (t >= p_.t_max) throw domain_error("rate: t at or above the max log count");
    if (t <= p_.t_low) return 0.0;
    double hi = lambda_hi_seed_;
    while (mean_map(hi) < t) {
        hi *= 2.0;
        if (hi > (double)((int64_t)1 << 40))
            throw domain_error("rate: tilt bracket blew up");
    }
    return bisect([&](double l) { return mean_map(l) - t; }, 0.0, hi, 1e-13, 300);
}

double RateFn::rate_I(double t) const {
    if (p_.uniform_fibres) {
        if (std::fabs(t - p_.t_low) <= 1e-12) return 0.0;
        throw domain_error("rate: uniform fibres, t must equal the single mean");
    }
    if (std::fabs(t - p_.t_max) <= 1e-12)
        return std::log((double)p_.M) - std::log((double)p_.groups.front().mult);
    if (t > p_.t_max) throw domain_error("rate: t above the max log count");
    double lam = lambda_of_t(t);
    return lam * t - log_mgf(lam);
}

std::vector<double> RateFn::entropy_max_vector(double t) const {
    if (p_.uniform_fibres) {
        if (std::fabs(t - p_.t_low) <= 1e-12)
            return std::vector<double>((size_t)p_.M, 1.0 / (double)p_.M);
        throw domain_error("rate: uniform fibres, t must equal the single mean");
    }
    double lam = lambda_of_t(t);
    size_t m = p_.counts.size();
    std::vector<double> q(m), lw(m);
    double mx = -std::numeric_limits<double>::infinity();
    for (size_t j = 0; j < m; ++j) {
        lw[j] = lam * std::log((double)p_.counts[j]);
        mx = std::max(mx, lw[j]);
    }
    double z = 0.0;
    for (size_t j = 0; j < m; ++j) z += std::exp(lw[j] - mx);
    for (size_t j = 0; j < m; ++j) q[j] = std::exp(lw[j] - mx) / z;
    return q;
}

double kl_identity_check(const RateFn& rf, const std::vector<double>& prob) {
    const ColumnProfile& p = rf.prof();
    if ((int64_t)prob.size() != p.M)
        throw domain_error("kl identity: vector length must match column count");
    double tot = 0.0;
    for (double v : prob) {
        if (v < -1e-15) throw domain_error("kl identity: negative mass");
        tot += v;
    }
    if (std::fabs(tot - 1.0) > 1e-9) throw domain_error("kl identity: mass must be 1");

    double t = 0.0;
    for (size_t j = 0; j < prob.size(); ++j)
        t += prob[j] * std::log((double)p.counts[j]);

    // relative entropies against the count law P_j = N_j/N and the uniform law
    double logN = std::log((double)p.N);
    double logM = std::log((double)p.M);
    double h_vs_counts = 0.0, h_vs_unif = 0.0;
    for (size_t j = 0; j < prob.size(); ++j) {
        if (prob[j] <= 0.0) continue;
        h_vs_counts += prob[j] * (std::log(prob[j]) - (std::log((double)p.counts[j]) - logN));
        h_vs_unif += prob[j] * (std::log(prob[j]) + logM);
    }
    return std::fabs(h_vs_counts - h_vs_unif - (logN - logM) + t);
}

double s_lower(const RateFn& rf) {
    const ColumnProfile& p = rf.prof();
    return std::log((double)p.M) / p.log_m + p.t_low / p.log_n;
}

double s_upper(const RateFn& rf) {
    const ColumnProfile& p = rf.prof();
    return std::log((double)p.M) / p.log_m + p.t_high / p.log_n;
}

PressureIdentity pressure_identity(const RateFn& rf, double s) {
    const ColumnProfile& p = rf.prof();
    if (p.uniform_fibres)
        throw domain_error("pressure identity: needs non-uniform fibres");
    double logM = std::log((double)p.M);
    double t = (s - logM / p.log_m) * p.log_n;
    if (t < p.t_low - 1e-9 || t > p.t_high + 1e-9)
        throw domain_error("pressure identity: s outside its interval");
    t = std::clamp(t, p.t_low, p.t_high);

    PressureIdentity out{};
    out.value = logM - rf.rate_I(t);
    out.residual_entropy = std::fabs(out.value - entropy(rf.entropy_max_vector(t)));

    double logN = std::log((double)p.N);
    double alpha = logN / p.log_m - (1.0 / p.log_m - 1.0 / p.log_n) * t;
    double f = multifractal_spectrum(p, alpha);
    out.residual_spectrum = std::fabs(out.value - (p.log_m * f - t / p.gamma));
    return out;
}

}  // namespace fracdim
