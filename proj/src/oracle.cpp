#include "fdim/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fdim/rate.hpp"
#include "fdim/util.hpp"

namespace fracdim {

namespace {

std::vector<std::pair<int64_t, int>> factorize(int64_t v) {
    std::vector<std::pair<int64_t, int>> f;
    for (int64_t p = 2; p * p <= v; ++p) {
        if (v % p) continue;
        int e = 0;
        while (v % p == 0) {
            v /= p;
            ++e;
        }
        f.push_back({p, e});
    }
    if (v > 1) f.push_back({v, 1});
    return f;
}

// gamma = log n / log m is rational iff m and n are powers of a common base;
// returns (num, den) of the reduced ratio in that case
bool rational_gamma(int64_t m, int64_t n, int64_t& num, int64_t& den) {
    auto fm = factorize(m), fn = factorize(n);
    if (fm.size() != fn.size()) return false;
    for (size_t i = 0; i < fm.size(); ++i)
        if (fm[i].first != fn[i].first) return false;
    int64_t a = fm[0].second, b = fn[0].second;
    int64_t g = std::gcd(a, b);
    a /= g;
    b /= g;
    for (size_t i = 0; i < fm.size(); ++i)
        if ((int64_t)fn[i].second * a != (int64_t)fm[i].second * b) return false;
    num = b;
    den = a;
    return true;
}

int64_t ipow_checked(int64_t base, int64_t e, int64_t cap) {
    int64_t v = 1;
    for (int64_t i = 0; i < e; ++i) {
        if (v > cap / base) throw budget_error("oracle: state space too large");
        v *= base;
    }
    return v;
}

double lse_range(const std::vector<double>& v, size_t lo, size_t cnt) {
    double mx = -std::numeric_limits<double>::infinity();
    for (size_t i = lo; i < lo + cnt; ++i) mx = std::max(mx, v[i]);
    if (mx == -std::numeric_limits<double>::infinity()) return mx;
    double s = 0;
    for (size_t i = lo; i < lo + cnt; ++i) s += std::exp(v[i] - mx);
    return mx + std::log(s);
}

}  // namespace

int64_t gamma_floor(const ColumnProfile& p, int64_t k) {
    if (k < 0) throw domain_error("gamma floor: need k >= 0");
    int64_t num, den;
    if (rational_gamma(p.m, p.n, num, den)) return (k * num) / den;
    long double g = logl((long double)p.n) / logl((long double)p.m);
    return (int64_t)floorl(g * (long double)k + 1e-10L);
}

double log_box_count(const ColumnProfile& p, int64_t K) {
    if (K < 1) throw domain_error("box count: need K >= 1");
    double logN = std::log((double)p.N);
    double logM = std::log((double)p.M);
    return (double)K * logN + (double)(gamma_floor(p, K) - K) * logM;
}

double psi_log(const ColumnProfile& p, const std::vector<int>& word, int64_t k,
               double s) {
    if (k < 0 || (size_t)k > word.size())
        throw domain_error("psi: prefix length out of range");
    double logM = std::log((double)p.M);
    double acc = 0;
    for (int64_t l = 0; l < k; ++l) {
        int j = word[(size_t)l];
        if (j < 0 || j >= (int)p.counts.size())
            throw domain_error("psi: word symbol out of range");
        acc += std::log((double)p.counts[(size_t)j]);
    }
    return (double)k * (p.gamma * logM - s * p.log_n) + acc;
}

double pressure_psi(const ColumnProfile& p, int64_t J, double s,
                    int64_t budget) {
    if (J < 1) throw domain_error("pressure: need J >= 1");
    if ((double)J * std::log2((double)p.M) > std::log2((double)budget))
        throw budget_error("pressure: too many column words");
    double logM = std::log((double)p.M);
    double step = p.gamma * logM - s * p.log_n;
    std::vector<double> logc(p.counts.size());
    for (size_t j = 0; j < logc.size(); ++j)
        logc[j] = std::log((double)p.counts[j]);
    LogSumAcc acc;
    // depth-first over column words, carrying the running prefix minimum
    std::function<void(int64_t, double, double)> walk = [&](int64_t depth,
                                                            double prod,
                                                            double mn) {
        if (depth == J) {
            acc.add(mn);
            return;
        }
        for (size_t j = 0; j < logc.size(); ++j) {
            double prod2 = prod + logc[j];
            double psi = (double)(depth + 1) * step + prod2;
            walk(depth + 1, prod2, std::min(mn, psi));
        }
    };
    walk(0, 0.0, 0.0);
    return acc.value();
}

double count_below(const ColumnProfile& p, int64_t J, double t,
                   int64_t budget) {
    if (J < 1) throw domain_error("count: need J >= 1");
    size_t M = p.counts.size();
    double comps = std::exp(std::lgamma((double)(J + (int64_t)M)) -
                            std::lgamma((double)(J + 1)) -
                            std::lgamma((double)M));
    if (comps > (double)budget)
        throw budget_error("count: too many column types");
    std::vector<double> logc(M);
    for (size_t j = 0; j < M; ++j) logc[j] = std::log((double)p.counts[j]);
    std::vector<int64_t> c(M, 0);
    LogSumAcc acc;
    std::function<void(size_t, int64_t)> walk = [&](size_t j, int64_t left) {
        if (j + 1 == M) {
            c[j] = left;
            double sum = 0, lmult = std::lgamma((double)(J + 1));
            for (size_t i = 0; i < M; ++i) {
                sum += (double)c[i] * logc[i];
                lmult -= std::lgamma((double)(c[i] + 1));
            }
            if (sum <= t * (double)J) acc.add(lmult + sum);
            return;
        }
        for (int64_t v = 0; v <= left; ++v) {
            c[j] = v;
            walk(j + 1, left - v);
        }
    };
    walk(0, J);
    return acc.value();
}

double count_below_direct(const ColumnProfile& p, int64_t J, double t,
                          int64_t budget) {
    if (J < 1) throw domain_error("count: need J >= 1");
    if ((double)J * std::log2((double)p.M) > std::log2((double)budget))
        throw budget_error("count: too many column words");
    std::vector<double> logc(p.counts.size());
    for (size_t j = 0; j < logc.size(); ++j)
        logc[j] = std::log((double)p.counts[j]);
    LogSumAcc acc;
    std::function<void(int64_t, double)> walk = [&](int64_t depth, double sum) {
        if (depth == J) {
            if (sum <= t * (double)J) acc.add(sum);
            return;
        }
        for (size_t j = 0; j < logc.size(); ++j) walk(depth + 1, sum + logc[j]);
    };
    walk(0, 0.0);
    return acc.value();
}

double count_below_rate(const ColumnProfile& p, double t) {
    RateFn rf(p);
    double tm = rf.mean_map(1.0);
    double tc = std::min(t, tm);
    return tc + std::log((double)p.M) - rf.rate_I(tc);
}

double two_scale_log_cost(const ColumnProfile& p, double theta, int64_t K,
                          double s, int64_t budget) {
    if (!(theta > 0.0) || theta > 1.0)
        throw domain_error("two-scale: theta must lie in (0, 1]");
    if (K < 1) throw domain_error("two-scale: need K >= 1");
    int64_t J0 = (int64_t)std::floor((double)K / theta + 1e-9);
    int64_t gK = gamma_floor(p, K), gJ = gamma_floor(p, J0);
    int64_t M = (int64_t)p.counts.size();
    double logM = std::log((double)M), logN = std::log((double)p.N);
    int64_t width = gK - K;
    // the subdivision cost depends only on the window symbols that constrain
    // map choices; the remaining symbols contribute a pure multiplicity
    int64_t pc = std::min(J0, gK) - K;
    int64_t npre = ipow_checked(M, pc, budget);
    double tail = (double)std::max<int64_t>(0, J0 - gK) * logN +
                  (double)(gJ - std::max(J0, gK)) * logM;
    double stop = -(double)K * s * p.log_n;
    std::vector<double> logc(p.counts.size());
    for (size_t j = 0; j < logc.size(); ++j)
        logc[j] = std::log((double)p.counts[j]);
    LogSumAcc acc;
    for (int64_t w = 0; w < npre; ++w) {
        double pref = 0;
        int64_t r = w;
        for (int64_t l = 0; l < pc; ++l) {
            pref += logc[(size_t)(r % M)];
            r /= M;
        }
        double subdiv = pref + tail - s * (double)J0 * p.log_n;
        acc.add(std::min(stop, subdiv) + (double)(width - pc) * logM);
    }
    return (double)K * logN + acc.value();
}

namespace {

struct DpTables {
    int64_t K, J0;
    std::vector<int64_t> width, nstate;   // per level K..J0
    std::vector<std::vector<double>> val; // cover cost per state
    std::vector<std::vector<char>> leaf;  // 1 when stopping is optimal
};

DpTables run_dp(const ColumnProfile& p, double theta, int64_t K, double s,
                int64_t budget) {
    if (!(theta > 0.0) || theta > 1.0)
        throw domain_error("cover dp: theta must lie in (0, 1]");
    if (K < 1) throw domain_error("cover dp: need K >= 1");
    DpTables T;
    T.K = K;
    T.J0 = (int64_t)std::floor((double)K / theta + 1e-9);
    int64_t M = (int64_t)p.counts.size();
    int64_t total = 0;
    for (int64_t k = K; k <= T.J0; ++k) {
        int64_t w = gamma_floor(p, k) - k;
        int64_t st = ipow_checked(M, w, budget);
        total += st;
        if (total > budget) throw budget_error("cover dp: state budget exceeded");
        T.width.push_back(w);
        T.nstate.push_back(st);
    }
    double logN = std::log((double)p.N);
    std::vector<double> logc(p.counts.size());
    for (size_t j = 0; j < logc.size(); ++j)
        logc[j] = std::log((double)p.counts[j]);

    size_t L = T.width.size();
    T.val.resize(L);
    T.leaf.resize(L);
    T.val[L - 1].assign((size_t)T.nstate[L - 1], -(double)T.J0 * s * p.log_n);
    T.leaf[L - 1].assign((size_t)T.nstate[L - 1], 1);
    for (size_t i = L - 1; i-- > 0;) {
        int64_t k = K + (int64_t)i;
        int64_t wk = T.width[i], wn = T.width[i + 1];
        int64_t delta = wn + 1 - wk;  // window symbols appended per level
        int64_t md = ipow_checked(M, delta, budget);
        double stop = -(double)k * s * p.log_n;
        const std::vector<double>& nxt = T.val[i + 1];
        T.val[i].resize((size_t)T.nstate[i]);
        T.leaf[i].resize((size_t)T.nstate[i]);
        if (wk == 0) {
            double sub = logN + lse_range(nxt, 0, nxt.size());
            T.val[i][0] = std::min(stop, sub);
            T.leaf[i][0] = stop <= sub;
            continue;
        }
        int64_t pw = T.nstate[i] / M;  // weight of the leading symbol
        for (int64_t w = 0; w < T.nstate[i]; ++w) {
            int64_t j = w / pw, rest = w % pw;
            double sub = logc[(size_t)j] +
                         lse_range(nxt, (size_t)(rest * md), (size_t)md);
            T.val[i][(size_t)w] = std::min(stop, sub);
            T.leaf[i][(size_t)w] = stop <= sub;
        }
    }
    return T;
}

}  // namespace

double dp_log_cost(const ColumnProfile& p, double theta, int64_t K, double s,
                   int64_t budget) {
    DpTables T = run_dp(p, theta, K, s, budget);
    double logN = std::log((double)p.N);
    return (double)K * logN + lse_range(T.val[0], 0, T.val[0].size());
}

double dp_partition_check(const ColumnProfile& p, double theta, int64_t K,
                          double s, int64_t budget) {
    DpTables T = run_dp(p, theta, K, s, budget);
    int64_t M = (int64_t)p.counts.size();
    double logN = std::log((double)p.N);
    std::vector<double> logc(p.counts.size());
    for (size_t j = 0; j < logc.size(); ++j)
        logc[j] = std::log((double)p.counts[j]);
    size_t L = T.width.size();
    double dev = 0;

    // coverage fraction of the cover the DP selected: exactly 1 everywhere
    std::vector<double> V((size_t)T.nstate[L - 1], 1.0);
    for (size_t i = L - 1; i-- > 0;) {
        std::vector<double> cur((size_t)T.nstate[i]);
        int64_t wk = T.width[i];
        if (wk == 0) {
            double sum = std::accumulate(V.begin(), V.end(), 0.0);
            cur[0] = T.leaf[i][0] ? 1.0 : sum / (double)V.size();
        } else {
            int64_t pw = T.nstate[i] / M;
            int64_t md = T.nstate[i + 1] / pw;
            for (int64_t w = 0; w < T.nstate[i]; ++w) {
                if (T.leaf[i][(size_t)w]) {
                    cur[(size_t)w] = 1.0;
                    continue;
                }
                int64_t rest = w % pw;
                double sum = 0;
                for (int64_t c = 0; c < md; ++c)
                    sum += V[(size_t)(rest * md + c)];
                cur[(size_t)w] = sum / (double)md;
            }
        }
        V.swap(cur);
    }
    for (double v : V) dev = std::max(dev, std::fabs(v - 1.0));

    // level-wise square counts must reproduce N^k exactly: each level-(k+1)
    // square descends from exactly one parent square
    std::vector<double> mult((size_t)T.nstate[0], (double)K * logN);
    for (size_t i = 0; i + 1 < L; ++i) {
        int64_t k = K + (int64_t)i + 1;
        std::vector<double> nxt((size_t)T.nstate[i + 1]);
        int64_t wk = T.width[i];
        if (wk == 0) {
            for (int64_t v = 0; v < T.nstate[i + 1]; ++v)
                nxt[(size_t)v] = logN + mult[0];
        } else {
            int64_t pw = T.nstate[i] / M;
            int64_t md = T.nstate[i + 1] / pw;
            for (int64_t v = 0; v < T.nstate[i + 1]; ++v) {
                LogSumAcc acc;
                int64_t rest = v / md;
                for (int64_t j = 0; j < M; ++j)
                    acc.add(logc[(size_t)j] + mult[(size_t)(j * pw + rest)]);
                nxt[(size_t)v] = acc.value();
            }
        }
        for (double lm : nxt) dev = std::max(dev, std::fabs(lm - (double)k * logN));
        mult.swap(nxt);
    }
    return dev;
}

double critical_s(const std::function<double(double)>& log_cost, double lo,
                  double hi, double xtol) {
    return bisect([&](double s) { return log_cost(s); }, lo, hi, xtol, 200);
}

}  // namespace fracdim
