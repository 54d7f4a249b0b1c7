#pragma once

#include <vector>

#include "fdim/carpet.hpp"

namespace fracdim {

// Large-deviation rate function of the column-count distribution.
// Immutable after construction; every evaluation is pure.
class RateFn {
  public:
    explicit RateFn(ColumnProfile p);

    const ColumnProfile& prof() const { return p_; }

    // mean of log counts under the tilted weights N_j^lambda (lambda >= 0)
    double mean_map(double lambda) const;

    // log((1/M) sum_j N_j^lambda)
    double log_mgf(double lambda) const;

    // the tilt solving mean_map(lambda) = t; domain t in [t_low, t_max)
    double lambda_of_t(double t) const;

    // I(t) = lambda(t) * t - log_mgf(lambda(t)); I(t_max) by its limit value.
    // Domain [t_low, t_max] (snapped within 1e-12 at the ends); outside -> throws.
    double rate_I(double t) const;

    // derivative of I, identical to the tilt
    double rate_I_prime(double t) const { return lambda_of_t(t); }

    // the entropy-maximizing column distribution at mean t (length M, counts order)
    std::vector<double> entropy_max_vector(double t) const;

  private:
    ColumnProfile p_;
    std::vector<double> log_val_;   // per distinct count
    std::vector<double> log_mult_;  // log multiplicities
    double lambda_hi_seed_;         // construction-time bracket seed
};

// |H(p||count-law) - H(p||tilted law at t(p)) - log(N/M) + t(p)| for a
// probability vector p over the columns; t(p) = sum p_j log N_j.
double kl_identity_check(const RateFn& rf, const std::vector<double>& prob);

// s-interval on which the pressure identities below are defined
double s_lower(const RateFn& rf);
double s_upper(const RateFn& rf);

struct PressureIdentity {
    double value;              // log M - I(t(s))
    double residual_entropy;   // vs the entropy of the maximizing vector
    double residual_spectrum;  // vs the multifractal-spectrum form
};
PressureIdentity pressure_identity(const RateFn& rf, double s);

}  // namespace fracdim
