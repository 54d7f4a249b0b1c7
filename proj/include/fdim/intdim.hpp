#pragma once

#include <string>
#include <utility>
#include <vector>

#include "fdim/rate.hpp"

namespace fracdim {

double dim_hausdorff(const ColumnProfile& p);
double dim_box(const ColumnProfile& p);

// Interpolation-window index L >= 1 of theta: the unique L with
// gamma^-L < theta <= gamma^-(L-1), with values within 1e-12 of a power
// snapped onto the boundary. theta in (0, 1].
int window_index(const ColumnProfile& p, double theta);

// t_1(s) = (s - log M/log m) log n and t_{l+1} = t_1(s) + gamma * I(t_l),
// returned for l = 1..L; throws when an iterate leaves the domain of I.
std::vector<double> t_sequence(const RateFn& rf, double s, int L);

// the map t -> t_1(s) + gamma * I(t)
double T_map(const RateFn& rf, double s, double t);

// defining function of the dimension equation; strictly decreasing in s
double main_equation_G(const RateFn& rf, double theta, double s);

// the intermediate dimension at theta (floor theta >= 1e-8)
double intermediate_dim(const RateFn& rf, double theta);
double intermediate_dim(const ColumnProfile& p, double theta);

// cross-check mode: locate the sign change of G on an equally spaced s-grid
double intermediate_dim_scan(const RateFn& rf, double theta, int64_t npoints);

// root of the reduced boundary equation at theta = gamma^-(L-1), L >= 2:
//   dim_box - (1/log m)(1 - 1/gamma) I(t_{L-1}(s)) - s = 0
double reduced_boundary_root(const RateFn& rf, int L);

// root of the reduced window-1 equation for gamma^-1 < theta <= 1:
//   dim_box - (1/theta - 1) I(t_1(s)) / log n - s = 0
double reduced_window1_root(const RateFn& rf, double theta);

// One-sided derivatives of theta -> intermediate dimension. Equal at interior
// points; at theta = gamma^-L the pair is (left, right) with left < right.
std::pair<double, double> dim_derivatives(const RateFn& rf, double theta);

// t' with I'(t') = 1/gamma
double t_prime(const RateFn& rf);

// t* with I(t*) = (dim_box - dim_hausdorff) log m / (1 - 1/gamma)
double t_star(const RateFn& rf);

// limit of the one-sided derivative ratio at the window transitions
double transition_gap_limit(const RateFn& rf);

struct CurveConfig {
    double theta_min = 0.001;
    double theta_max = 1.0;
    int count = 512;
    bool include_transitions = true;
};

struct DimCurve {
    ColumnProfile profile;
    std::vector<double> thetas;
    std::vector<double> values;
    std::vector<int> L;
    std::vector<double> t_last;   // deepest iterate t_L(s(theta))
    std::vector<double> d_minus;
    std::vector<double> d_plus;
    std::vector<std::pair<int, double>> transitions;  // (L, gamma^-L) inside the range
};

DimCurve curve(const RateFn& rf, const CurveConfig& cfg);
std::string curve_to_csv(const DimCurve& c);

}  // namespace fracdim
