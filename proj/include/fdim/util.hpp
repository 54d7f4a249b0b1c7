#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace fracdim {

// thrown on malformed input files / strings
struct parse_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// thrown when an argument is outside the mathematical domain of an operation
struct domain_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// thrown when an enumeration would exceed its hard work budget
struct budget_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// log(sum exp(a_i)), stable under a shared shift; empty -> -inf
double log_sum_exp(const std::vector<double>& a);

// streaming version for deep enumerations (single pass, rescales on new max)
class LogSumAcc {
  public:
    void add(double a) {
        if (a == -std::numeric_limits<double>::infinity()) return;
        if (a <= shift_) {
            sum_ += std::exp(a - shift_);
        } else {
            sum_ = sum_ * std::exp(shift_ - a) + 1.0;
            shift_ = a;
        }
    }
    bool empty() const { return sum_ == 0.0; }
    double value() const {
        if (sum_ == 0.0) return -std::numeric_limits<double>::infinity();
        return shift_ + std::log(sum_);
    }

  private:
    double shift_ = -std::numeric_limits<double>::infinity();
    double sum_ = 0.0;
};

// Bisection for f with a sign change on [lo, hi]. Halves the bracket until it
// is narrower than xtol (or max_iter steps) and returns the midpoint.
template <class F>
double bisect(F&& f, double lo, double hi, double xtol, int max_iter = 200) {
    double flo = f(lo);
    if (flo == 0.0) return lo;
    double fhi = f(hi);
    if (fhi == 0.0) return hi;
    if ((flo > 0) == (fhi > 0))
        throw domain_error("bisect: no sign change on bracket");
    for (int it = 0; it < max_iter && (hi - lo) > xtol; ++it) {
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;  // bracket at float resolution
        double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm > 0) == (flo > 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

// -sum p log p with 0 log 0 = 0
double entropy(const std::vector<double>& p);

// shortest %g-style decimal with the given significant digits
std::string fmt_g(double v, int sig = 15);

// write via temp file + rename so readers never observe a partial file
void atomic_write_file(const std::string& path, const std::string& content);

}  // namespace fracdim
