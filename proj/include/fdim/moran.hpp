#pragma once

#include <memory>
#include <string>
#include <vector>

#include "fdim/bounds.hpp"

namespace fracdim {

// One arc of the oscillating target function g. Exponential arcs run toward
// a limit at unit rate; table arcs are monotone piecewise-linear samples.
struct GSegment {
    enum Kind { exparc, table } kind = exparc;
    double x0 = 0, x1 = 0;
    double limit = 0, v0 = 0;        // exparc: limit - (limit - v0) e^{-(x - x0)}
    std::vector<double> xs, vs;      // table nodes (absolute x)
};

class GFunction {
  public:
    double lambda = 0, alpha = 0;
    double x_end = 0;
    std::vector<GSegment> segs;

    double eval(double x) const;           // constant for x <= 0; throws past x_end
    std::vector<double> knots() const;     // arc boundaries and table nodes

    static GFunction constant(double c, double lambda, double alpha, double x_end);
};

// Mountain-and-valley realization of a target dimension function h: the
// sliding-window dimension of the resulting g equals h, window by window.
GFunction build_g_from_h(const HSpec& h, double x_depth);

// A Moran construction plan: contraction ratios r_k whose running products
// rho_k satisfy loglog(1/rho_k) = x_k.
struct MoranPlan {
    int d = 1;
    double w0 = 0;
    std::vector<double> ratios;
    std::vector<double> x;
    std::shared_ptr<const GFunction> g;  // generator, when available

    std::string to_json() const;
};

MoranPlan plan_from_json(const std::string& text);

// Materializes `levels` ratio steps of the plan realizing g (scan + bisection
// per step). d is the ambient cube dimension.
MoranPlan discretize(const GFunction& g, int d, int levels);

// number of construction levels at resolution x = loglog(1/delta); exact from
// the materialized prefix, closed-form beyond it (needs the generator)
double level_count(const MoranPlan& plan, double x);

// the scale exponent s_r at resolution x
double scale_dim(const MoranPlan& plan, double x);

// worst residual of |scale_dim - g| measured against its d log2 e^{-x}
// envelope over the materialized prefix (negative: within the envelope)
double gdisc_excess(const MoranPlan& plan);

// finite-depth estimate of the theta-intermediate dimension: max over window
// positions in [x_lo, x_hi] of the windowed infimum of the scale exponent
double sliding_window_dim(const MoranPlan& plan, double theta, double x_lo,
                          double x_hi);

struct AssouadBounds {
    double upper = 0;  // limsup estimate of D+g + g over the tail
    double lower = 0;  // liminf estimate
};
AssouadBounds moran_assouad_bounds(const GFunction& g, double x_from, double x_to);

}  // namespace fracdim
