#include "fdim/bounds.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "fdim/util.hpp"

namespace fracdim {

namespace {

void check_pair(double lambda, double alpha, double theta, double h, double phi) {
    if (!(lambda >= 0.0) || !(alpha >= lambda))
        throw domain_error("two-point bound: need 0 <= lambda <= alpha");
    if (!(theta > 0.0) || !(theta <= phi) || !(phi <= 1.0))
        throw domain_error("two-point bound: need 0 < theta <= phi <= 1");
    if (h < lambda - 1e-12 || h > alpha + 1e-12)
        throw domain_error("two-point bound: value outside [lambda, alpha]");
}

}  // namespace

double two_point_upper_bound(double lambda, double alpha, double theta,
                             double h_theta, double phi) {
    check_pair(lambda, alpha, theta, h_theta, phi);
    double h = std::clamp(h_theta, lambda, alpha);
    double den = phi * (h - lambda) + theta * (alpha - h);
    if (den <= 0.0) return h;  // h == lambda == alpha
    return h + (h - lambda) * (alpha - h) * (phi - theta) / den;
}

double lower_bound_from_larger_theta(double lambda, double alpha, double h_phi,
                                     double theta, double phi) {
    check_pair(lambda, alpha, theta, h_phi, phi);
    double h = std::clamp(h_phi, lambda, alpha);
    double den = theta * (h - lambda) + phi * (alpha - h);
    if (den <= 0.0) return h;
    return (alpha * theta * (h - lambda) + phi * lambda * (alpha - h)) / den;
}

double HSpec::eval(double theta) const {
    if (grid.empty()) throw domain_error("h spec: empty grid");
    if (theta <= grid.front()) return values.front();
    if (theta >= grid.back()) return values.back();
    size_t hi = (size_t)(std::upper_bound(grid.begin(), grid.end(), theta) -
                         grid.begin());
    double t0 = grid[hi - 1], t1 = grid[hi];
    double w = (theta - t0) / (t1 - t0);
    return values[hi - 1] * (1.0 - w) + values[hi] * w;
}

HSpec hspec_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw parse_error(std::string("h spec: ") + e.what());
    }
    HSpec h;
    try {
        h.lambda = j.at("lambda").get<double>();
        h.alpha = j.at("alpha").get<double>();
        h.grid = j.at("grid").get<std::vector<double>>();
        h.values = j.at("values").get<std::vector<double>>();
    } catch (const nlohmann::json::exception& e) {
        throw parse_error(std::string("h spec: ") + e.what());
    }
    return h;
}

std::string hspec_to_json(const HSpec& h) {
    nlohmann::ordered_json j;
    j["lambda"] = h.lambda;
    j["alpha"] = h.alpha;
    j["grid"] = h.grid;
    j["values"] = h.values;
    return j.dump(2) + "\n";
}

HReport hclass_check(const HSpec& h) {
    if (h.grid.size() != h.values.size())
        throw domain_error("h spec: grid/values length mismatch");
    if (h.grid.size() < 3) throw domain_error("h spec: need at least 3 samples");
    if (!(h.lambda >= 0.0) || !(h.lambda <= h.alpha))
        throw domain_error("h spec: need 0 <= lambda <= alpha");
    for (size_t i = 0; i < h.grid.size(); ++i) {
        if (h.grid[i] < 0.0 || h.grid[i] > 1.0)
            throw domain_error("h spec: grid outside [0, 1]");
        if (i && h.grid[i] <= h.grid[i - 1])
            throw domain_error("h spec: grid must be strictly increasing");
    }
    if (std::fabs(h.grid.back() - 1.0) > 1e-12)
        throw domain_error("h spec: grid must reach 1");

    HReport rep;
    for (size_t i = 0; i < h.values.size(); ++i) {
        double v = h.values[i];
        if (v < h.lambda - 1e-12 || v > h.alpha + 1e-12)
            rep.violations.push_back(
                {i, "range", std::max(h.lambda - v, v - h.alpha)});
    }
    for (size_t i = 0; i + 1 < h.grid.size(); ++i) {
        double v0 = h.values[i], v1 = h.values[i + 1];
        if (v1 < v0 - 1e-12)
            rep.violations.push_back({i, "monotone", v0 - v1});
        if (h.grid[i] > 0.0) {
            double ub = two_point_upper_bound(
                h.lambda, h.alpha, h.grid[i],
                std::clamp(v0, h.lambda, h.alpha), h.grid[i + 1]);
            if (v1 > ub + 1e-12)
                rep.violations.push_back({i, "growth", v1 - ub});
        }
    }
    rep.pass = rep.violations.empty();
    return rep;
}

double lattice_dim(double p, int d, double theta) {
    if (!(p > 0.0)) throw domain_error("lattice family: need p > 0");
    if (d < 1) throw domain_error("lattice family: need d >= 1");
    if (theta < 0.0 || theta > 1.0)
        throw domain_error("lattice family: theta in [0, 1]");
    return (double)d * theta / (p + theta);
}

PopcornDims popcorn_dims(double t, int d, double theta) {
    if (!(t > 0.0)) throw domain_error("popcorn family: need t > 0");
    if (d < 2) throw domain_error("popcorn family: need d >= 2");
    if (!(theta > 0.0) || theta > 1.0)
        throw domain_error("popcorn family: theta in (0, 1]");
    PopcornDims out;
    double dd = (double)d;
    if (t >= dd / (dd - 1.0)) {
        out.intermediate = out.box = out.assouad = dd - 1.0;
        return out;
    }
    out.assouad = dd;
    out.box = dd * dd / (dd + t);
    double knee = (dd - 1.0) * t / dd;
    out.intermediate = (theta <= knee) ? dd - 1.0 : dd * dd * theta / (dd * theta + t);
    return out;
}

namespace {

// certified comparison of the ratio sum against 1; returns sum - 1 with a
// symmetric error bar no wider than needed to decide the sign
double similarity_sum_minus_one(const SimilarityFamily& f, double t) {
    if (!f.parametric()) {
        double s = 0.0;
        for (double c : f.explicit_ratios) s += std::pow(c, t);
        if (f.tail) {
            double rt = std::pow(f.tail->rho, t);
            s += std::pow(f.tail->c, t) * rt / (1.0 - rt);
        }
        return s - 1.0;
    }
    // c_i = a * i^(-q); the series diverges when q t <= 1
    double qt = f.q * t;
    if (qt <= 1.0) return std::numeric_limits<double>::infinity();
    double at = std::pow(f.a, t);
    double partial = 0.0;
    int64_t N = 64;
    int64_t i = 1;
    for (;;) {
        for (; i <= N; ++i) partial += at * std::pow((double)i, -qt);
        double tail_hi = at * std::pow((double)N, 1.0 - qt) / (qt - 1.0);
        double tail_lo = at * std::pow((double)N + 1.0, 1.0 - qt) / (qt - 1.0);
        double lo = partial + tail_lo - 1.0, hi = partial + tail_hi - 1.0;
        if (lo > 0.0 || hi < 0.0 || (tail_hi - tail_lo) < 1e-14)
            return 0.5 * (lo + hi);
        if (N >= ((int64_t)1 << 22)) return 0.5 * (lo + hi);
        N *= 2;
    }
}

void validate_family(const SimilarityFamily& f) {
    if (f.parametric()) {
        if (!(f.a > 0.0) || !(f.a < 1.0))
            throw domain_error("similarity family: need a in (0, 1)");
        if (!(f.q > 0.0)) throw domain_error("similarity family: need q > 0");
        return;
    }
    for (double c : f.explicit_ratios)
        if (!(c > 0.0) || !(c < 1.0))
            throw domain_error("similarity family: ratios must lie in (0, 1)");
    if (f.tail) {
        if (!(f.tail->rho > 0.0) || !(f.tail->rho < 1.0))
            throw domain_error("similarity family: tail rho in (0, 1)");
        if (!(f.tail->c > 0.0) || !(f.tail->c * f.tail->rho < 1.0))
            throw domain_error("similarity family: tail ratios must lie in (0, 1)");
    }
    if (f.explicit_ratios.empty() && !f.tail)
        throw domain_error("similarity family: empty");
}

}  // namespace

double similarity_h(const SimilarityFamily& f, double spatial_dim) {
    validate_family(f);
    if (!(spatial_dim > 0.0)) throw domain_error("similarity: spatial_dim > 0");
    if (similarity_sum_minus_one(f, spatial_dim) >= 0.0)
        throw domain_error("similarity: h >= spatial_dim for this family");
    // the sum is strictly decreasing in t with sum(0+) >= 1
    return bisect([&](double t) { return similarity_sum_minus_one(f, t); }, 0.0,
                  spatial_dim, 1e-10, 300);
}

double similarity_theta_S(const SimilarityFamily& f) {
    if (!f.parametric())
        throw domain_error("theta_S: defined for the parametric family");
    validate_family(f);
    return 1.0 / f.q;
}

SimilarityFamily similarity_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw parse_error(std::string("similarity family: ") + e.what());
    }
    SimilarityFamily f;
    try {
        std::string kind = j.at("kind").get<std::string>();
        if (kind == "parametric") {
            f.a = j.at("a").get<double>();
            f.q = j.at("q").get<double>();
        } else if (kind == "explicit") {
            f.explicit_ratios = j.at("ratios").get<std::vector<double>>();
            if (j.contains("tail") && !j["tail"].is_null()) {
                GeometricTail t;
                t.c = j["tail"].at("c").get<double>();
                t.rho = j["tail"].at("rho").get<double>();
                f.tail = t;
            }
        } else {
            throw parse_error("similarity family: unknown kind " + kind);
        }
    } catch (const nlohmann::json::exception& e) {
        throw parse_error(std::string("similarity family: ") + e.what());
    }
    validate_family(f);
    return f;
}

std::string similarity_to_json(const SimilarityFamily& f) {
    nlohmann::ordered_json j;
    if (f.parametric()) {
        j["kind"] = "parametric";
        j["a"] = f.a;
        j["q"] = f.q;
    } else {
        j["kind"] = "explicit";
        j["ratios"] = f.explicit_ratios;
        if (f.tail)
            j["tail"] = {{"c", f.tail->c}, {"rho", f.tail->rho}};
        else
            j["tail"] = nullptr;
    }
    return j.dump(2) + "\n";
}

double cifs_intdim(double h, double p, int d, double theta) {
    return std::max(h, lattice_dim(p, d, theta));
}

double ctdfrac_finiteness(double p, CtdfracKind kind) {
    if (!(p > 0.0)) throw domain_error("ctdfrac: need p > 0");
    return kind == CtdfracKind::real ? 1.0 / (2.0 * p) : 1.0 / p;
}

double ctdfrac_intdim(double h, double p, CtdfracKind kind, double theta) {
    int d = kind == CtdfracKind::real ? 1 : 2;
    return std::max(h, lattice_dim(p, d, theta));
}

}  // namespace fracdim
