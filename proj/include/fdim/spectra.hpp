#pragma once

#include <string>
#include <vector>

#include "fdim/carpet.hpp"
#include "fdim/intdim.hpp"

namespace fracdim {

// Legendre exponent of the uniform Bernoulli measure: beta(0) = Hausdorff
// dimension, beta(1) = 0, convex and decreasing.
double beta_exponent(const ColumnProfile& p, double xi);
double beta_exponent_prime(const ColumnProfile& p, double xi);

struct SpectrumDomain {
    double alpha_min, alpha_max;
};
SpectrumDomain spectrum_domain(const ColumnProfile& p);

// Legendre transform f(alpha) = inf_xi (alpha xi + beta(xi)); needs a
// non-uniform profile and alpha strictly inside the domain.
double multifractal_spectrum(const ColumnProfile& p, double alpha);

// L^q scaling exponent of the uniform measure, and its closed re-expression
// through beta (they agree identically).
double lq_spectrum(const ColumnProfile& p, double q);
double lq_spectrum_beta_form(const ColumnProfile& p, double q);

enum class EquivDecision { equivalent, inequivalent, incomparable_grids };

struct EquivCheckRow {
    int i = 0;           // group index, largest counts first
    double N_ratio = 0;  // count ratio N_i / N'_i
    double R_ratio = 0;  // multiplicity ratio R'_i / R_i
    double target = 0;   // required N-ratio (M'/M)^gamma
    bool pass = false;
};

struct EquivReport {
    EquivDecision decision = EquivDecision::incomparable_grids;
    int64_t common_m = 0, common_n = 0;
    std::vector<EquivCheckRow> checks;
    std::string to_json() const;
};

// Decides whether two carpets have identical intermediate-dimension data in
// the strong count-proportionality sense, after moving both to a common grid.
EquivReport equivalent_intdim(const CarpetSpec& a, const CarpetSpec& b);

struct HolderBound {
    double theta_star = 0;  // where the ratio dips lowest
    double bound = 0;       // min over the grid of curve_a / curve_b
};

HolderBound holder_bound(const std::vector<double>& thetas,
                         const std::vector<double>& values_a,
                         const std::vector<double>& values_b);
HolderBound holder_bound(const DimCurve& a, const DimCurve& b);

}  // namespace fracdim
