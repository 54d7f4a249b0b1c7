#include "fdim/moran.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "fdim/util.hpp"

namespace fracdim {

namespace {
constexpr double kLog2 = 0.6931471805599453;
}

double GFunction::eval(double x) const {
    if (segs.empty()) throw domain_error("g: not built");
    const GSegment& first = segs.front();
    if (x <= first.x0)
        return first.kind == GSegment::exparc ? first.v0 : first.vs.front();
    if (x > x_end + 1e-9) throw domain_error("g: x beyond the built depth");
    x = std::min(x, x_end);
    size_t lo = 0, hi = segs.size() - 1;
    while (lo < hi) {
        size_t mid = (lo + hi + 1) / 2;
        if (segs[mid].x0 <= x)
            lo = mid;
        else
            hi = mid - 1;
    }
    const GSegment& s = segs[lo];
    if (s.kind == GSegment::exparc)
        return s.limit - (s.limit - s.v0) * std::exp(-(x - s.x0));
    if (x <= s.xs.front()) return s.vs.front();
    if (x >= s.xs.back()) return s.vs.back();
    size_t j = (size_t)(std::upper_bound(s.xs.begin(), s.xs.end(), x) -
                        s.xs.begin());
    double w = (x - s.xs[j - 1]) / (s.xs[j] - s.xs[j - 1]);
    return s.vs[j - 1] * (1.0 - w) + s.vs[j] * w;
}

std::vector<double> GFunction::knots() const {
    std::vector<double> k;
    for (const GSegment& s : segs) {
        k.push_back(s.x0);
        if (s.kind == GSegment::table)
            for (double xx : s.xs) k.push_back(xx);
    }
    k.push_back(x_end);
    std::sort(k.begin(), k.end());
    k.erase(std::unique(k.begin(), k.end(),
                        [](double a, double b) { return std::fabs(a - b) <= 1e-13; }),
            k.end());
    return k;
}

GFunction GFunction::constant(double c, double lambda, double alpha, double x_end) {
    GFunction g;
    g.lambda = lambda;
    g.alpha = alpha;
    g.x_end = x_end;
    GSegment s;
    s.kind = GSegment::table;
    s.x0 = 0;
    s.x1 = x_end;
    s.xs = {0.0, x_end};
    s.vs = {c, c};
    g.segs.push_back(s);
    return g;
}

GFunction build_g_from_h(const HSpec& h, double x_depth) {
    HReport rep = hclass_check(h);
    if (!rep.pass)
        throw domain_error("build g: h is outside the realizable class");
    if (!(x_depth > 0.0)) throw domain_error("build g: need a positive depth");

    const double alpha = h.alpha, lambda = h.lambda;
    const double h1 = h.eval(1.0), h0 = h.eval(0.0);
    if (alpha - h1 <= 1e-12)
        throw domain_error("build g: alpha must strictly exceed h(1)");

    GFunction g;
    g.lambda = lambda;
    g.alpha = alpha;
    double X = 0.0;

    for (int n = 1;; ++n) {
        if (n > 400) throw budget_error("build g: depth needs too many arcs");
        double eps = std::pow(2.0, (double)-n);
        double he = h.eval(eps);
        double hnext = h.eval(0.5 * eps);
        double len = (double)n * kLog2;

        // mountain: rise from h(eps) toward alpha until hitting h(1) ...
        double xstar = std::log((alpha - he) / (alpha - h1));
        if (xstar > 1e-15) {
            GSegment s;
            s.kind = GSegment::exparc;
            s.x0 = X;
            s.x1 = X + xstar;
            s.limit = alpha;
            s.v0 = he;
            g.segs.push_back(s);
        }
        // ... then walk back down along the h profile
        {
            std::vector<double> thetas;
            for (int j = 0; j <= 64; ++j)
                thetas.push_back(std::exp(std::log(eps) * (double)j / 64.0));
            for (double t : h.grid)
                if (t > eps && t < 1.0) thetas.push_back(t);
            std::sort(thetas.begin(), thetas.end(), std::greater<double>());
            GSegment s;
            s.kind = GSegment::table;
            s.x0 = X + std::max(xstar, 0.0);
            s.x1 = X + len;
            double prev_u = -1.0;
            for (double t : thetas) {
                double u = std::log((alpha - he) / (alpha - h.eval(t))) -
                           std::log(t);
                if (u <= prev_u + 1e-13) continue;
                prev_u = u;
                s.xs.push_back(X + u);
                s.vs.push_back(h.eval(t));
            }
            // pin the exact endpoints of the mountain
            s.xs.front() = s.x0;
            s.vs.front() = h1;
            s.xs.back() = s.x1;
            s.vs.back() = he;
            g.segs.push_back(s);
        }
        X += len;

        // valley: dip toward lambda, then recover to h(eps/2)
        double gam = 0.5 * (h0 + hnext);
        if (he - gam > 1e-14) {
            if (gam - lambda <= 1e-14)
                throw domain_error("build g: h must stay strictly above lambda near 0");
            double wstar = std::log((he - lambda) / (gam - lambda));
            if (wstar > 1e-15) {
                GSegment s;
                s.kind = GSegment::exparc;
                s.x0 = X;
                s.x1 = X + wstar;
                s.limit = lambda;
                s.v0 = he;
                g.segs.push_back(s);
                X += wstar;
            }
        } else {
            gam = he;  // nothing to dip: continue at the current value
        }
        double wr = std::log((alpha - gam) / (alpha - hnext));
        if (wr > 1e-15) {
            GSegment s;
            s.kind = GSegment::exparc;
            s.x0 = X;
            s.x1 = X + wr;
            s.limit = alpha;
            s.v0 = gam;
            g.segs.push_back(s);
            X += wr;
        }
        if (X >= x_depth) break;
    }
    g.x_end = X;
    return g;
}

MoranPlan discretize(const GFunction& g, int d, int levels) {
    if (d < 1) throw domain_error("discretize: need d >= 1");
    if (levels < 1) throw domain_error("discretize: need at least one level");
    double g0 = g.eval(0.0);
    if (!(g0 > 1e-12)) throw domain_error("discretize: g(0) must be positive");
    if (g.alpha > (double)d + 1e-12)
        throw domain_error("discretize: need alpha <= d for ratios <= 1/2");

    MoranPlan plan;
    plan.d = d;
    plan.g = std::make_shared<GFunction>(g);
    const double dlog2 = (double)d * kLog2;

    double L1 = 2.0 * dlog2 / g0;  // log(1/rho_1)
    double r1 = std::exp(-L1);
    if (r1 > 0.5 + 1e-12)
        throw domain_error("discretize: first ratio exceeds 1/2");
    plan.w0 = std::log(L1);
    plan.x.push_back(plan.w0);
    plan.ratios.push_back(r1);

    auto G = [&](double x) { return g.eval(x - plan.w0); };

    for (int k = 2; k <= levels; ++k) {
        double y = plan.x.back();
        double gy = G(y);
        auto F = [&](double xx) {
            return gy * std::exp(y - xx) - G(xx) + dlog2 * std::exp(-xx);
        };
        double step = std::exp(-y) / 4.0;
        double prev = y, xx = y + step;
        int64_t guard = 0;
        while (true) {
            if (xx - plan.w0 > g.x_end)
                throw domain_error(
                    "discretize: generator not built deep enough for these levels");
            if (!(F(xx) > 0.0)) break;
            prev = xx;
            xx += step;
            if (++guard > (int64_t)50000000)
                throw budget_error("discretize: scan budget exceeded");
        }
        double root = bisect(F, prev, xx, 4e-16 * std::max(1.0, xx), 200);
        double ratio = std::exp(-std::exp(y) * std::expm1(root - y));
        if (ratio > 0.5) {
            // alpha == d puts climbing stretches exactly at the 1/2 boundary;
            // only round-off can land above it, so snap back onto the boundary.
            if (ratio > 0.5 + 1e-9)
                throw domain_error("discretize: ratio exceeded 1/2");
            ratio = 0.5;
            root = y + std::log1p(kLog2 * std::exp(-y));
        }
        plan.x.push_back(root);
        plan.ratios.push_back(ratio);
    }
    return plan;
}

double level_count(const MoranPlan& plan, double x) {
    if (plan.x.empty()) throw domain_error("plan: empty");
    if (x < plan.x.front()) return 1.0;
    if (x <= plan.x.back()) {
        size_t k = (size_t)(std::upper_bound(plan.x.begin(), plan.x.end(), x) -
                            plan.x.begin());
        return (double)k + 1.0;
    }
    if (!plan.g)
        throw domain_error("plan: resolution beyond the materialized levels");
    if (x > 700.0) throw domain_error("plan: resolution out of range");
    double dlog2 = (double)plan.d * kLog2;
    double phi = plan.g->eval(x - plan.w0) * std::exp(x);
    return std::floor(phi / dlog2 + 1e-9);
}

double scale_dim(const MoranPlan& plan, double x) {
    double dlog2 = (double)plan.d * kLog2;
    return level_count(plan, x) * dlog2 * std::exp(-x);
}

double gdisc_excess(const MoranPlan& plan) {
    if (!plan.g) throw domain_error("plan: generator required");
    double dlog2 = (double)plan.d * kLog2;
    auto G = [&](double x) { return plan.g->eval(x - plan.w0); };
    double worst = -std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < plan.x.size(); ++i) {
        double xk = plan.x[i];
        double s = ((double)i + 2.0) * dlog2 * std::exp(-xk);
        double excess = std::fabs(s - G(xk)) - dlog2 * std::exp(-xk);
        worst = std::max(worst, excess);
        if (i + 1 < plan.x.size()) {
            double xm = 0.5 * (xk + plan.x[i + 1]);
            double sm = ((double)i + 2.0) * dlog2 * std::exp(-xm);
            worst = std::max(worst, std::fabs(sm - G(xm)) - dlog2 * std::exp(-xm));
        }
    }
    return worst;
}

namespace {

// sparse-table range minimum over the piece infima of the scale exponent
struct RangeMin {
    std::vector<std::vector<double>> tab;
    explicit RangeMin(std::vector<double> v) {
        tab.push_back(std::move(v));
        for (size_t len = 2; len <= tab[0].size(); len *= 2) {
            const auto& prev = tab.back();
            std::vector<double> row(prev.size() - len / 2);
            for (size_t i = 0; i < row.size(); ++i)
                row[i] = std::min(prev[i], prev[i + len / 2]);
            tab.push_back(std::move(row));
        }
    }
    double query(size_t lo, size_t hi) const {  // inclusive, lo <= hi
        size_t level = 0, span = 1;
        while (span * 2 <= hi - lo + 1) {
            span *= 2;
            ++level;
        }
        return std::min(tab[level][lo], tab[level][hi + 1 - span]);
    }
};

}  // namespace

double sliding_window_dim(const MoranPlan& plan, double theta, double x_lo,
                          double x_hi) {
    if (!(theta > 0.0) || theta > 1.0)
        throw domain_error("window dim: theta must lie in (0, 1]");
    if (!(x_lo < x_hi)) throw domain_error("window dim: need x_lo < x_hi");
    if (!(x_lo > plan.w0))
        throw domain_error("window dim: range starts before the plan");
    const double W = -std::log(theta);
    const double b_max = x_hi + W;
    const double dlog2 = (double)plan.d * kLog2;

    if (level_count(plan, b_max) - level_count(plan, x_lo) < 3.0)
        throw domain_error("window dim: fewer than 3 levels inside the window range");

    bool materialized = b_max <= plan.x.back();
    if (!materialized && !plan.g)
        throw domain_error("window dim: range beyond the materialized levels");

    // candidate window positions: endpoints, knot-aligned edges, uniform fill
    std::vector<double> pos{x_lo, x_hi};
    std::vector<double> marks;
    if (materialized) {
        for (double xx : plan.x)
            if (xx >= x_lo && xx <= b_max) marks.push_back(xx);
    } else {
        for (double kx : plan.g->knots()) {
            double xx = kx + plan.w0;
            if (xx >= x_lo && xx <= b_max) marks.push_back(xx);
        }
    }
    for (double mk : marks) {
        if (mk >= x_lo && mk <= x_hi) pos.push_back(mk);
        if (mk - W >= x_lo && mk - W <= x_hi) pos.push_back(mk - W);
    }
    int fill = 4096;
    for (int i = 1; i < fill; ++i)
        pos.push_back(x_lo + (x_hi - x_lo) * (double)i / (double)fill);
    std::sort(pos.begin(), pos.end());
    pos.erase(std::unique(pos.begin(), pos.end()), pos.end());

    double best = -std::numeric_limits<double>::infinity();

    if (materialized) {
        std::vector<double> piece_inf(plan.x.size());
        for (size_t i = 0; i < plan.x.size(); ++i)
            piece_inf[i] = ((double)i + 1.0) * dlog2 * std::exp(-plan.x[i]);
        RangeMin rmq(std::move(piece_inf));
        for (double a : pos) {
            double b = a + W;
            double inf = scale_dim(plan, b);
            size_t lo = (size_t)(std::upper_bound(plan.x.begin(), plan.x.end(), a) -
                                 plan.x.begin());
            size_t hi = (size_t)(std::upper_bound(plan.x.begin(), plan.x.end(), b) -
                                 plan.x.begin());
            if (hi > lo) inf = std::min(inf, rmq.query(lo, hi - 1));
            best = std::max(best, inf);
        }
        return best;
    }

    // Beyond the prefix the piece infima ride the envelope g - d log2 e^{-x},
    // whose minimum on each arc sits at an arc endpoint.
    std::vector<double> kn;
    for (double kx : plan.g->knots()) kn.push_back(kx + plan.w0);
    auto E = [&](double x) {
        return plan.g->eval(x - plan.w0) - dlog2 * std::exp(-x);
    };
    for (double a : pos) {
        double b = a + W;
        double inf = std::min(E(a), E(b));
        size_t lo = (size_t)(std::upper_bound(kn.begin(), kn.end(), a) - kn.begin());
        for (size_t i = lo; i < kn.size() && kn[i] < b; ++i)
            inf = std::min(inf, E(kn[i]));
        best = std::max(best, inf);
    }
    return best;
}

AssouadBounds moran_assouad_bounds(const GFunction& g, double x_from, double x_to) {
    if (!(x_from < x_to) || x_to > g.x_end)
        throw domain_error("assouad bounds: bad range");
    const double fd = 1e-6;
    std::vector<double> samples;
    std::vector<double> kn = g.knots();
    for (size_t i = 0; i + 1 < kn.size(); ++i) {
        if (kn[i + 1] < x_from || kn[i] > x_to) continue;
        double a = std::max(kn[i], x_from), b = std::min(kn[i + 1], x_to);
        for (int j = 0; j <= 32; ++j)
            samples.push_back(a + (b - a) * (double)j / 32.0);
    }
    AssouadBounds out{-std::numeric_limits<double>::infinity(),
                      std::numeric_limits<double>::infinity()};
    for (double x : samples) {
        if (x + fd > g.x_end) continue;
        double v = (g.eval(x + fd) - g.eval(x)) / fd + g.eval(x);
        out.upper = std::max(out.upper, v);
        out.lower = std::min(out.lower, v);
    }
    return out;
}

std::string MoranPlan::to_json() const {
    nlohmann::ordered_json j;
    j["d"] = d;
    j["w0"] = w0;
    j["ratios"] = ratios;
    j["x"] = x;
    return j.dump(2) + "\n";
}

MoranPlan plan_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw parse_error(std::string("plan: ") + e.what());
    }
    MoranPlan p;
    try {
        p.d = j.at("d").get<int>();
        p.w0 = j.at("w0").get<double>();
        p.ratios = j.at("ratios").get<std::vector<double>>();
        p.x = j.at("x").get<std::vector<double>>();
    } catch (const nlohmann::json::exception& e) {
        throw parse_error(std::string("plan: ") + e.what());
    }
    if (p.ratios.size() != p.x.size() || p.x.empty())
        throw parse_error("plan: ratios/x length mismatch");
    return p;
}

}  // namespace fracdim
