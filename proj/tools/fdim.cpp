// fdim - command line front end for the fractal dimension toolkit.
//
// Subcommands: dim, equiv, oracle {box,pressure,count,dp,twoscale},
// moran build, family {popcorn,lattice,ctdfrac,similarity}.
// All file output is atomic (temp + rename); exit codes: 0 ok/equivalent,
// 1 inequivalent, 2 bad input or domain/budget failure, 3 incomparable grids.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fdim/bounds.hpp"
#include "fdim/carpet.hpp"
#include "fdim/intdim.hpp"
#include "fdim/moran.hpp"
#include "fdim/oracle.hpp"
#include "fdim/rate.hpp"
#include "fdim/spectra.hpp"
#include "fdim/util.hpp"

using nlohmann::ordered_json;
using namespace fracdim;

namespace {

struct ThetaGrid {
    double lo = 0.001, hi = 1.0;
    int count = 512;
};

ThetaGrid parse_theta_grid(const std::string& s) {
    ThetaGrid g;
    char extra;
    if (std::sscanf(s.c_str(), "%lf:%lf:%d%c", &g.lo, &g.hi, &g.count, &extra) != 3)
        throw parse_error("theta grid must be min:max:count, got '" + s + "'");
    if (!(g.lo > 0.0) || !(g.hi <= 1.0) || !(g.lo < g.hi))
        throw domain_error("theta grid must satisfy 0 < min < max <= 1");
    if (g.count < 2) throw domain_error("theta grid needs at least 2 samples");
    return g;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw parse_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string infer_format(const std::string& path, const std::string& forced) {
    if (!forced.empty()) return forced;
    auto dot = path.rfind('.');
    std::string ext = dot == std::string::npos ? "" : path.substr(dot + 1);
    if (ext == "json") return "json";
    if (ext == "svg") return "svg";
    return "csv";
}

// Static polyline plot with axis ticks and optional dashed vertical markers.
std::string svg_plot(const std::vector<double>& xs, const std::vector<double>& ys,
                     const std::vector<std::pair<std::string, double>>& marks,
                     const std::string& xlabel, const std::string& ylabel) {
    const double W = 640, H = 420, ml = 80, mr = 24, mt = 24, mb = 52;
    double xmin = xs.front(), xmax = xs.back();
    double ymin = ys[0], ymax = ys[0];
    for (double v : ys) {
        ymin = std::min(ymin, v);
        ymax = std::max(ymax, v);
    }
    double pad = (ymax - ymin) * 0.08;
    if (pad <= 0) pad = std::max(1e-6, std::fabs(ymax) * 0.05 + 1e-6);
    ymin -= pad;
    ymax += pad;
    auto px = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * (W - ml - mr); };
    auto py = [&](double y) { return H - mb - (y - ymin) / (ymax - ymin) * (H - mt - mb); };

    char buf[256];
    std::string out;
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"420\" "
           "viewBox=\"0 0 640 420\">\n";
    out += "<rect width=\"640\" height=\"420\" fill=\"white\"/>\n";
    std::snprintf(buf, sizeof buf,
                  "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"black\"/>\n",
                  ml, H - mb, W - mr, H - mb);
    out += buf;
    std::snprintf(buf, sizeof buf,
                  "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"black\"/>\n",
                  ml, mt, ml, H - mb);
    out += buf;
    for (int i = 0; i <= 5; ++i) {
        double fx = xmin + (xmax - xmin) * i / 5.0;
        double fy = ymin + (ymax - ymin) * i / 5.0;
        std::snprintf(buf, sizeof buf,
                      "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"black\"/>\n",
                      px(fx), H - mb, px(fx), H - mb + 5);
        out += buf;
        std::snprintf(buf, sizeof buf,
                      "<text x=\"%.2f\" y=\"%.2f\" font-family=\"monospace\" font-size=\"11\" "
                      "text-anchor=\"middle\">%.4g</text>\n",
                      px(fx), H - mb + 18, fx);
        out += buf;
        std::snprintf(buf, sizeof buf,
                      "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"black\"/>\n",
                      ml - 5, py(fy), ml, py(fy));
        out += buf;
        std::snprintf(buf, sizeof buf,
                      "<text x=\"%.2f\" y=\"%.2f\" font-family=\"monospace\" font-size=\"11\" "
                      "text-anchor=\"end\">%.6g</text>\n",
                      ml - 8, py(fy) + 4, fy);
        out += buf;
    }
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%.2f\" y=\"%.2f\" font-family=\"monospace\" font-size=\"12\" "
                  "text-anchor=\"middle\">%s</text>\n",
                  (ml + W - mr) / 2, H - 12, xlabel.c_str());
    out += buf;
    std::snprintf(buf, sizeof buf,
                  "<text x=\"16\" y=\"%.2f\" font-family=\"monospace\" font-size=\"12\" "
                  "text-anchor=\"middle\" transform=\"rotate(-90 16 %.2f)\">%s</text>\n",
                  (mt + H - mb) / 2, (mt + H - mb) / 2, ylabel.c_str());
    out += buf;
    for (const auto& mk : marks) {
        if (mk.second < xmin || mk.second > xmax) continue;
        std::snprintf(buf, sizeof buf,
                      "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"#c04040\" "
                      "stroke-dasharray=\"4 3\"/>\n",
                      px(mk.second), mt, px(mk.second), H - mb);
        out += buf;
        std::snprintf(buf, sizeof buf,
                      "<text x=\"%.2f\" y=\"%.2f\" font-family=\"monospace\" font-size=\"10\" "
                      "fill=\"#c04040\" text-anchor=\"middle\">%s</text>\n",
                      px(mk.second), mt - 6, mk.first.c_str());
        out += buf;
    }
    out += "<polyline fill=\"none\" stroke=\"#2060a0\" stroke-width=\"1.5\" points=\"";
    for (size_t i = 0; i < xs.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%s%.2f,%.2f", i ? " " : "", px(xs[i]), py(ys[i]));
        out += buf;
    }
    out += "\"/>\n</svg>\n";
    return out;
}

void emit_json(const ordered_json& j, const std::string& out_path) {
    std::string text = j.dump(2) + "\n";
    std::fputs(text.c_str(), stdout);
    if (!out_path.empty()) atomic_write_file(out_path, text);
}

// ---- dim ------------------------------------------------------------

int cmd_dim(const std::string& carpet_path, const std::string& grid_spec,
            bool no_transitions, const std::string& out_path,
            const std::string& forced_format, const std::string& svg_path) {
    ThetaGrid tg = parse_theta_grid(grid_spec);
    CarpetSpec spec = read_carpet_file(carpet_path);
    ColumnProfile p = profile(spec);
    RateFn rf(p);
    CurveConfig cfg;
    cfg.theta_min = tg.lo;
    cfg.theta_max = tg.hi;
    cfg.count = tg.count;
    cfg.include_transitions = !no_transitions;
    DimCurve c = curve(rf, cfg);

    std::string format = infer_format(out_path, forced_format);
    std::vector<std::pair<std::string, double>> marks;
    for (const auto& tr : c.transitions) {
        char lab[48];
        std::snprintf(lab, sizeof lab, "L=%d", tr.first);
        marks.push_back({lab, tr.second});
    }
    if (!out_path.empty()) {
        if (format == "csv") {
            atomic_write_file(out_path, curve_to_csv(c));
        } else if (format == "json") {
            ordered_json j;
            j["m"] = p.m;
            j["n"] = p.n;
            j["gamma"] = p.gamma;
            j["dim_H"] = dim_hausdorff(p);
            j["dim_B"] = dim_box(p);
            j["uniform_fibres"] = p.uniform_fibres;
            ordered_json jt = ordered_json::array();
            for (const auto& tr : c.transitions)
                jt.push_back({{"L", tr.first}, {"theta", tr.second}});
            j["transitions"] = jt;
            j["theta"] = c.thetas;
            j["dim"] = c.values;
            j["window"] = c.L;
            j["t_last"] = c.t_last;
            j["d_minus"] = c.d_minus;
            j["d_plus"] = c.d_plus;
            atomic_write_file(out_path, j.dump(2) + "\n");
        } else if (format == "svg") {
            atomic_write_file(out_path,
                              svg_plot(c.thetas, c.values, marks, "theta", "dim_theta"));
        } else {
            throw parse_error("unknown output format '" + format + "'");
        }
    }
    if (!svg_path.empty())
        atomic_write_file(svg_path, svg_plot(c.thetas, c.values, marks, "theta", "dim_theta"));

    std::printf("m=%lld n=%lld M=%lld N=%lld gamma=%s\n", (long long)p.m, (long long)p.n,
                (long long)p.M, (long long)p.N, fmt_g(p.gamma).c_str());
    std::printf("dim_H=%s dim_B=%s\n", fmt_g(dim_hausdorff(p)).c_str(),
                fmt_g(dim_box(p)).c_str());
    if (p.uniform_fibres) std::printf("uniform fibres: dim_theta is constant\n");
    std::printf("samples=%zu transitions=%zu", c.thetas.size(), c.transitions.size());
    if (!out_path.empty()) std::printf(" wrote %s", out_path.c_str());
    if (!svg_path.empty()) std::printf(" and %s", svg_path.c_str());
    std::printf("\n");
    return 0;
}

// ---- equiv ----------------------------------------------------------

int cmd_equiv(const std::string& path_a, const std::string& path_b,
              const std::string& out_path) {
    CarpetSpec a = read_carpet_file(path_a);
    CarpetSpec b = read_carpet_file(path_b);
    EquivReport rep = equivalent_intdim(a, b);

    const char* what = rep.decision == EquivDecision::equivalent     ? "equivalent"
                       : rep.decision == EquivDecision::inequivalent ? "inequivalent"
                                                                     : "incomparable grids";
    if (rep.common_m > 0)
        std::printf("common grid: %lldx%lld\n", (long long)rep.common_m,
                    (long long)rep.common_n);
    else
        std::printf("no common grid refinement\n");
    for (const auto& row : rep.checks)
        std::printf("group %d: N_ratio=%s target=%s R_ratio=%s %s\n", row.i,
                    fmt_g(row.N_ratio, 10).c_str(), fmt_g(row.target, 10).c_str(),
                    fmt_g(row.R_ratio, 10).c_str(), row.pass ? "ok" : "FAIL");
    std::printf("decision: %s\n", what);

    if (rep.decision == EquivDecision::inequivalent) {
        ColumnProfile pa = profile(a), pb = profile(b);
        std::printf("dim_H: %s vs %s\n", fmt_g(dim_hausdorff(pa)).c_str(),
                    fmt_g(dim_hausdorff(pb)).c_str());
        std::printf("dim_B: %s vs %s\n", fmt_g(dim_box(pa)).c_str(),
                    fmt_g(dim_box(pb)).c_str());
        CurveConfig cfg;
        cfg.count = 257;
        RateFn ra(pa), rb(pb);
        DimCurve ca = curve(ra, cfg), cb = curve(rb, cfg);
        HolderBound f = holder_bound(ca, cb);
        HolderBound r = holder_bound(cb, ca);
        if (r.bound < f.bound) f = r;
        std::printf("holder bound at theta = %s: %s%s\n", fmt_g(f.theta_star, 6).c_str(),
                    fmt_g(f.bound, 10).c_str(), f.bound < 0.9995 ? " (< 0.9995)" : "");
    }
    if (!out_path.empty()) atomic_write_file(out_path, rep.to_json());
    switch (rep.decision) {
        case EquivDecision::equivalent: return 0;
        case EquivDecision::inequivalent: return 1;
        default: return 3;
    }
}

// ---- oracle ---------------------------------------------------------

int oracle_box(const std::string& carpet_path, int64_t K, const std::string& out_path) {
    ColumnProfile p = profile(read_carpet_file(carpet_path));
    double lc = log_box_count(p, K);
    double slope = lc / ((double)K * p.log_n);
    ordered_json j;
    j["K"] = K;
    j["log_count"] = lc;
    j["slope"] = slope;
    j["reference_rate"] = dim_box(p);
    j["gap"] = slope - dim_box(p);
    emit_json(j, out_path);
    return 0;
}

int oracle_pressure(const std::string& carpet_path, int64_t J, double s, int64_t budget,
                    const std::string& out_path) {
    ColumnProfile p = profile(read_carpet_file(carpet_path));
    RateFn rf(p);
    double lp = pressure_psi(p, J, s, budget);
    double t1 = (s - std::log((double)p.M) / p.log_m) * p.log_n;
    double ref = std::log((double)p.M) - rf.rate_I(t1);
    ordered_json j;
    j["J"] = J;
    j["s"] = s;
    j["log_cost"] = lp;
    j["rate"] = lp / (double)J;
    j["reference_rate"] = ref;
    j["gap"] = lp / (double)J - ref;
    emit_json(j, out_path);
    return 0;
}

int oracle_count(const std::string& carpet_path, int64_t J, double t, bool direct,
                 int64_t budget, const std::string& out_path) {
    ColumnProfile p = profile(read_carpet_file(carpet_path));
    double lc = direct ? count_below_direct(p, J, t, budget) : count_below(p, J, t, budget);
    double ref = count_below_rate(p, t);
    ordered_json j;
    j["J"] = J;
    j["t"] = t;
    j["log_count"] = lc;
    j["rate"] = lc / (double)J;
    j["reference_rate"] = ref;
    j["gap"] = lc / (double)J - ref;
    emit_json(j, out_path);
    return 0;
}

int oracle_cover(bool dp, const std::string& carpet_path, double theta, int64_t K,
                 double s, bool scan, int64_t budget, const std::string& out_path) {
    ColumnProfile p = profile(read_carpet_file(carpet_path));
    RateFn rf(p);
    double ref = intermediate_dim(rf, theta);
    ordered_json j;
    j["K"] = K;
    j["theta"] = theta;
    auto cost = [&](int64_t KK, double ss) {
        return dp ? dp_log_cost(p, theta, KK, ss, budget)
                  : two_scale_log_cost(p, theta, KK, ss, budget);
    };
    if (scan) {
        if (K < 4 || K % 2)
            throw domain_error("scan needs an even K >= 4 (compares K against K/2)");
        int64_t Kr = K / 2;
        // Difference of the two log-costs estimates the growth exponent's
        // root; the bounded per-K prefactor cancels.
        auto diff = [&](double ss) { return cost(K, ss) - cost(Kr, ss); };
        double lo = std::max(1e-3, dim_hausdorff(p) - 0.5);
        double hi = dim_box(p) + 0.5;
        double crit = critical_s(diff, lo, hi);
        j["K_ref"] = Kr;
        j["s"] = crit;
        j["log_cost"] = cost(K, crit);
        j["reference_rate"] = ref;
        j["gap"] = crit - ref;
    } else {
        j["s"] = s;
        j["log_cost"] = cost(K, s);
        j["reference_rate"] = ref;
        j["gap"] = s - ref;
    }
    emit_json(j, out_path);
    return 0;
}

// ---- moran ----------------------------------------------------------

int moran_build(const std::string& h_path, double depth, int d, int levels, bool check,
                const std::vector<std::string>& windows, const std::string& out_path) {
    HSpec h = hspec_from_json(read_text_file(h_path));
    HReport hr = hclass_check(h);
    if (!hr.pass) {
        for (const auto& v : hr.violations)
            std::fprintf(stderr, "h violation at grid point %zu: %s by %s\n",
                         (size_t)v.index, v.kind.c_str(), fmt_g(v.amount, 6).c_str());
        throw domain_error("h is outside the realizable class");
    }
    std::printf("h admissible on (lambda, alpha) = (%s, %s)\n", fmt_g(h.lambda, 6).c_str(),
                fmt_g(h.alpha, 6).c_str());
    GFunction g = build_g_from_h(h, depth);
    std::printf("generator: %zu arcs, depth %s\n", g.segs.size(), fmt_g(g.x_end, 8).c_str());
    MoranPlan plan = discretize(g, d, levels);
    std::printf("plan: %d levels, x in [%s, %s], r_1 = %s\n", levels,
                fmt_g(plan.x.front(), 8).c_str(), fmt_g(plan.x.back(), 8).c_str(),
                fmt_g(plan.ratios.front(), 8).c_str());

    if (check) {
        std::printf("  k          x_k        ratio          s_r            g     bound\n");
        int step = std::max(1, levels / 12);
        const double dlog2 = d * std::log(2.0);
        for (int k = 0; k < levels; k += (k < 4 ? 1 : step)) {
            double xk = plan.x[(size_t)k];
            double sr = scale_dim(plan, xk);
            double gv = plan.g->eval(xk - plan.w0);
            std::printf("%3d %12.6f %12.8f %12.8f %12.8f %9.2e\n", k + 1, xk,
                        plan.ratios[(size_t)k], sr, gv, dlog2 * std::exp(-xk));
        }
        double ex = gdisc_excess(plan);
        std::printf("discretization excess over the d*log2*e^-x bound: %s (pass=%s)\n",
                    fmt_g(ex, 6).c_str(), ex <= 1e-9 ? "yes" : "NO");
        AssouadBounds ab = moran_assouad_bounds(g, 0.25, g.x_end - 0.25);
        std::printf("slope envelope: lower=%s upper=%s\n", fmt_g(ab.lower, 8).c_str(),
                    fmt_g(ab.upper, 8).c_str());
    }
    for (const auto& w : windows) {
        double th, xlo, xhi;
        char extra;
        if (std::sscanf(w.c_str(), "%lf:%lf:%lf%c", &th, &xlo, &xhi, &extra) != 3)
            throw parse_error("window must be theta:x_lo:x_hi, got '" + w + "'");
        double v = sliding_window_dim(plan, th, xlo, xhi);
        std::printf("window theta=%s over x in [%s, %s]: dim=%s (h=%s)\n",
                    fmt_g(th, 6).c_str(), fmt_g(xlo, 6).c_str(), fmt_g(xhi, 6).c_str(),
                    fmt_g(v, 10).c_str(), fmt_g(h.eval(th), 10).c_str());
    }
    if (!out_path.empty()) {
        atomic_write_file(out_path, plan.to_json());
        std::printf("wrote %s\n", out_path.c_str());
    }
    return 0;
}

// ---- family ---------------------------------------------------------

int family_curve(const std::string& kind, double t, double pexp, int d, bool complex_kind,
                 double h, double a, double q, const std::string& grid_spec,
                 const std::string& out_path, const std::string& forced_format) {
    ThetaGrid tg = parse_theta_grid(grid_spec);
    std::vector<double> xs, ys;
    std::vector<std::pair<std::string, double>> marks;
    std::string header = "theta,dim\n";
    std::string comment;

    auto fill = [&](auto&& f) {
        for (int i = 0; i < tg.count; ++i) {
            double th = tg.lo + (tg.hi - tg.lo) * i / (double)(tg.count - 1);
            xs.push_back(th);
            ys.push_back(f(th));
        }
    };

    if (kind == "popcorn") {
        double knee = (d - 1) * t / (double)d;
        if (knee > tg.lo && knee < tg.hi) {
            xs.push_back(knee);  // pin the kink into the grid
        }
        fill([&](double th) { return popcorn_dims(t, d, th).intermediate; });
        xs.push_back(knee);
        std::sort(xs.begin(), xs.end());
        xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
        ys.clear();
        for (double th : xs) ys.push_back(popcorn_dims(t, d, th).intermediate);
        char buf[96];
        std::snprintf(buf, sizeof buf, "# transition theta=%s\n", fmt_g(knee, 10).c_str());
        comment = buf;
        marks.push_back({"knee", knee});
        PopcornDims at = popcorn_dims(t, d, std::min(1.0, std::max(knee, tg.lo)));
        std::printf("popcorn t=%s d=%d: transition at theta=%s, dim there %s, box %s, assouad %s\n",
                    fmt_g(t, 6).c_str(), d, fmt_g(knee, 10).c_str(),
                    fmt_g(at.intermediate, 10).c_str(), fmt_g(at.box, 10).c_str(),
                    fmt_g(at.assouad, 10).c_str());
    } else if (kind == "lattice") {
        fill([&](double th) { return lattice_dim(pexp, d, th); });
        std::printf("lattice p=%s d=%d: dim(1)=%s\n", fmt_g(pexp, 6).c_str(), d,
                    fmt_g(lattice_dim(pexp, d, 1.0), 10).c_str());
    } else if (kind == "ctdfrac") {
        CtdfracKind ck = complex_kind ? CtdfracKind::complex : CtdfracKind::real;
        double ts = ctdfrac_finiteness(pexp, ck);
        fill([&](double th) { return ctdfrac_intdim(h, pexp, ck, th); });
        marks.push_back({"theta_S", ts});
        std::printf("ctdfrac p=%s (%s): finiteness theta_S=%s, h=%s\n", fmt_g(pexp, 6).c_str(),
                    complex_kind ? "complex" : "real", fmt_g(ts, 10).c_str(),
                    fmt_g(h, 10).c_str());
    } else if (kind == "similarity") {
        SimilarityFamily f;
        f.a = a;
        f.q = q;
        double hh = similarity_h(f, d);
        double ts = similarity_theta_S(f);
        ordered_json j;
        j["a"] = a;
        j["q"] = q;
        j["spatial_dim"] = d;
        j["h"] = hh;
        j["theta_S"] = ts;
        emit_json(j, out_path);
        return 0;
    } else {
        throw parse_error("unknown family '" + kind + "'");
    }

    if (!out_path.empty()) {
        std::string format = infer_format(out_path, forced_format);
        if (format == "csv") {
            std::string text = comment + header;
            for (size_t i = 0; i < xs.size(); ++i)
                text += fmt_g(xs[i]) + "," + fmt_g(ys[i]) + "\n";
            atomic_write_file(out_path, text);
        } else if (format == "svg") {
            atomic_write_file(out_path, svg_plot(xs, ys, marks, "theta", "dim"));
        } else {
            ordered_json j;
            j["family"] = kind;
            j["theta"] = xs;
            j["dim"] = ys;
            atomic_write_file(out_path, j.dump(2) + "\n");
        }
        std::printf("wrote %s\n", out_path.c_str());
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fractal dimension toolkit: carpets, rate functions, spectra, "
                 "Moran constructions and brute-force oracles"};
    app.require_subcommand(1);
    int rc = 0;

    // dim
    auto* sdim = app.add_subcommand("dim", "intermediate dimension curve of a carpet");
    std::string dim_carpet, dim_grid = "0.001:1:512", dim_out, dim_fmt, dim_svg;
    bool dim_notrans = false;
    sdim->add_option("--carpet", dim_carpet, "carpet grid file")->required();
    sdim->add_option("--theta", dim_grid, "theta grid min:max:count");
    sdim->add_option("--out", dim_out, "output file (.csv/.json/.svg)");
    sdim->add_option("--format", dim_fmt, "force output format")
        ->check(CLI::IsMember({"csv", "json", "svg"}));
    sdim->add_option("--svg", dim_svg, "also write an svg plot here");
    sdim->add_flag("--no-transitions", dim_notrans, "do not pin gamma^-L points into the grid");
    sdim->callback([&] { rc = cmd_dim(dim_carpet, dim_grid, dim_notrans, dim_out, dim_fmt, dim_svg); });

    // equiv
    auto* seq = app.add_subcommand("equiv", "test two carpets for equal dimension curves");
    std::string eq_a, eq_b, eq_out;
    seq->add_option("a", eq_a, "first carpet grid file")->required();
    seq->add_option("b", eq_b, "second carpet grid file")->required();
    seq->add_option("--out", eq_out, "write the report as json");
    seq->callback([&] { rc = cmd_equiv(eq_a, eq_b, eq_out); });

    // oracle
    auto* sor = app.add_subcommand("oracle", "brute-force combinatorial cross-checks");
    sor->require_subcommand(1);
    std::string or_carpet, or_out;
    int64_t or_K = 16, or_J = 12;
    double or_s = 0, or_t = 0, or_theta = 0.7;
    int64_t or_budget = int64_t(1) << 26;
    bool or_scan = false, or_direct = false;

    auto* sbox = sor->add_subcommand("box", "approximate-square count and box slope");
    sbox->add_option("--carpet", or_carpet, "carpet grid file")->required();
    sbox->add_option("--K", or_K, "level")->required();
    sbox->add_option("--out", or_out, "also write json here");
    sbox->callback([&] { rc = oracle_box(or_carpet, or_K, or_out); });

    auto* spre = sor->add_subcommand("pressure", "prefix-minimal cost sum over column words");
    spre->add_option("--carpet", or_carpet, "carpet grid file")->required();
    spre->add_option("--J", or_J, "word length")->required();
    spre->add_option("--s", or_s, "exponent")->required();
    spre->add_option("--budget", or_budget, "enumeration cap");
    spre->add_option("--out", or_out, "also write json here");
    spre->callback([&] { rc = oracle_pressure(or_carpet, or_J, or_s, or_budget, or_out); });

    auto* scnt = sor->add_subcommand("count", "words with column average below a threshold");
    scnt->add_option("--carpet", or_carpet, "carpet grid file")->required();
    scnt->add_option("--J", or_J, "word length")->required();
    scnt->add_option("--t", or_t, "average threshold")->required();
    scnt->add_flag("--direct", or_direct, "enumerate all words instead of types");
    scnt->add_option("--budget", or_budget, "enumeration cap");
    scnt->add_option("--out", or_out, "also write json here");
    scnt->callback([&] { rc = oracle_count(or_carpet, or_J, or_t, or_direct, or_budget, or_out); });

    auto add_cover = [&](const char* name, const char* help, bool dp) {
        auto* sc = sor->add_subcommand(name, help);
        sc->add_option("--carpet", or_carpet, "carpet grid file")->required();
        sc->add_option("--theta", or_theta, "scale ratio exponent")->required();
        sc->add_option("--K", or_K, "coarsest level")->required();
        sc->add_option("--s", or_s, "evaluate the cost at this exponent");
        sc->add_flag("--scan-s", or_scan, "locate the critical exponent instead");
        sc->add_option("--budget", or_budget, "state/enumeration cap");
        sc->add_option("--out", or_out, "also write json here");
        sc->callback([&, dp, sc] {
            if (!or_scan && sc->count("--s") == 0)
                throw domain_error("need --s or --scan-s");
            rc = oracle_cover(dp, or_carpet, or_theta, or_K, or_s, or_scan, or_budget, or_out);
        });
    };
    add_cover("dp", "minimal cover cost by exact dynamic programming", true);
    add_cover("twoscale", "stop-or-subdivide two-scale cover cost", false);

    // moran
    auto* smo = app.add_subcommand("moran", "homogeneous Moran constructions");
    smo->require_subcommand(1);
    auto* sbuild = smo->add_subcommand("build", "realize a dimension profile as a Moran plan");
    sbuild->set_help_flag("--help", "print help");  // frees --h for the profile option
    std::string mo_h, mo_out;
    double mo_depth = 40;
    int mo_d = 1, mo_levels = 2000;
    bool mo_check = false;
    std::vector<std::string> mo_windows;
    sbuild->add_option("--h", mo_h, "target profile json {lambda, alpha, grid, values}")->required();
    sbuild->add_option("--depth", mo_depth, "generator depth in x = loglog(1/delta)");
    sbuild->add_option("--d", mo_d, "ambient dimension");
    sbuild->add_option("--levels", mo_levels, "materialized construction levels");
    sbuild->add_flag("--check", mo_check, "print the discretization residual table");
    sbuild->add_option("--window", mo_windows, "evaluate a sliding window, theta:x_lo:x_hi");
    sbuild->add_option("--out", mo_out, "write the plan json");
    sbuild->callback([&] { rc = moran_build(mo_h, mo_depth, mo_d, mo_levels, mo_check, mo_windows, mo_out); });

    // family
    auto* sfam = app.add_subcommand("family", "closed-form dimension families");
    sfam->require_subcommand(1);
    std::string fa_grid = "0.001:1:257", fa_out, fa_fmt;
    double fa_t = 1, fa_p = 1, fa_h = 0, fa_a = 0.5, fa_q = 2;
    int fa_d = 2;
    bool fa_complex = false;

    auto* spop = sfam->add_subcommand("popcorn", "popcorn-graph dimension curve");
    spop->add_option("--t", fa_t, "exponent parameter")->required();
    spop->add_option("--d", fa_d, "ambient dimension")->required();
    spop->add_option("--theta", fa_grid, "theta grid min:max:count");
    spop->add_option("--out", fa_out, "output file");
    spop->add_option("--format", fa_fmt)->check(CLI::IsMember({"csv", "json", "svg"}));
    spop->callback([&] {
        rc = family_curve("popcorn", fa_t, fa_p, fa_d, false, fa_h, fa_a, fa_q, fa_grid, fa_out, fa_fmt);
    });

    auto* slat = sfam->add_subcommand("lattice", "polynomial lattice dimension curve");
    slat->add_option("--p", fa_p, "decay exponent")->required();
    slat->add_option("--d", fa_d, "ambient dimension")->required();
    slat->add_option("--theta", fa_grid, "theta grid min:max:count");
    slat->add_option("--out", fa_out, "output file");
    slat->add_option("--format", fa_fmt)->check(CLI::IsMember({"csv", "json", "svg"}));
    slat->callback([&] {
        rc = family_curve("lattice", fa_t, fa_p, fa_d, false, fa_h, fa_a, fa_q, fa_grid, fa_out, fa_fmt);
    });

    auto* sctd = sfam->add_subcommand("ctdfrac", "continued-fraction set dimension curve");
    sctd->set_help_flag("--help", "print help");  // frees --h for the dimension option
    sctd->add_option("--p", fa_p, "index decay exponent")->required();
    sctd->add_option("--h", fa_h, "conformal dimension of the full system")->required();
    sctd->add_flag("--complex", fa_complex, "complex variant");
    sctd->add_option("--theta", fa_grid, "theta grid min:max:count");
    sctd->add_option("--out", fa_out, "output file");
    sctd->add_option("--format", fa_fmt)->check(CLI::IsMember({"csv", "json", "svg"}));
    sctd->callback([&] {
        rc = family_curve("ctdfrac", fa_t, fa_p, fa_d, fa_complex, fa_h, fa_a, fa_q, fa_grid, fa_out, fa_fmt);
    });

    auto* ssim = sfam->add_subcommand("similarity", "parametric similarity family a/(i+q)");
    ssim->add_option("--a", fa_a, "scale factor")->required();
    ssim->add_option("--q", fa_q, "index shift / finiteness exponent")->required();
    ssim->add_option("--dim", fa_d, "spatial dimension");
    ssim->add_option("--out", fa_out, "write the result json");
    ssim->callback([&] {
        rc = family_curve("similarity", fa_t, fa_p, fa_d, false, fa_h, fa_a, fa_q, fa_grid, fa_out, fa_fmt);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return rc;
}
