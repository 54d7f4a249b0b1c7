#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace fracdim {

// Largest value at phi compatible with value h at theta for a dimension
// function pinched between lambda and alpha (0 < theta <= phi <= 1).
double two_point_upper_bound(double lambda, double alpha, double theta,
                             double h_theta, double phi);

// Dual form: smallest value at theta compatible with value h_phi at phi.
double lower_bound_from_larger_theta(double lambda, double alpha, double h_phi,
                                     double theta, double phi);

// A candidate dimension function sampled on a grid in [0, 1].
struct HSpec {
    double lambda = 0;
    double alpha = 0;
    std::vector<double> grid;
    std::vector<double> values;

    double eval(double theta) const;  // linear interpolation, constant tails
};

HSpec hspec_from_json(const std::string& text);
std::string hspec_to_json(const HSpec& h);

struct HViolation {
    size_t index = 0;     // left sample of the offending pair
    std::string kind;     // "range" | "monotone" | "growth"
    double amount = 0;
};

struct HReport {
    bool pass = true;
    std::vector<HViolation> violations;
};

// Checks membership in the realizable class: values within [lambda, alpha],
// non-decreasing, and every adjacent pair within the two-point growth bound.
HReport hclass_check(const HSpec& h);

// d * theta / (p + theta): the family attaining both two-point bounds
double lattice_dim(double p, int d, double theta);

struct PopcornDims {
    double intermediate = 0;
    double box = 0;
    double assouad = 0;
};
PopcornDims popcorn_dims(double t, int d, double theta);

// Similarity family: explicit ratios plus an optional geometric tail,
// or the parametric family c_i = a * i^(-q).
struct GeometricTail {
    double c = 0;
    double rho = 0;  // ratios c * rho^i for i >= 1
};

struct SimilarityFamily {
    std::vector<double> explicit_ratios;
    std::optional<GeometricTail> tail;
    double a = 0, q = 0;  // parametric mode when explicit_ratios is empty

    bool parametric() const { return explicit_ratios.empty() && !tail; }
};

SimilarityFamily similarity_from_json(const std::string& text);
std::string similarity_to_json(const SimilarityFamily& f);

// similarity exponent: inf of t with sum of ratios^t < 1; throws when the sum
// never drops below 1 on (0, spatial_dim]
double similarity_h(const SimilarityFamily& f, double spatial_dim);

// phase-transition point of the parametric family
double similarity_theta_S(const SimilarityFamily& f);

// intermediate dimensions of the fixed-point families
double cifs_intdim(double h, double p, int d, double theta);

enum class CtdfracKind { real, complex };

// finiteness threshold of the associated series
double ctdfrac_finiteness(double p, CtdfracKind kind);

// full curve value max{h, theta/(p+theta)} (real) or max{h, 2 theta/(p+theta)}
double ctdfrac_intdim(double h, double p, CtdfracKind kind, double theta);

}  // namespace fracdim
