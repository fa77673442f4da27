#pragma once

#include <cmath>
#include <cstddef>
#include <functional>

namespace ikde {

//! Kahan-Neumaier compensated accumulator for long sums.
struct KahanSum {
    double sum = 0.0;
    double comp = 0.0;

    void add(double x) {
        const double t = sum + x;
        if (std::abs(sum) >= std::abs(x)) {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }

    double value() const { return sum + comp; }
};

//! Composite Simpson rule with `panels` (even, >= 2) equal panels on [a, b].
double simpson(const std::function<double(double)>& f, double a, double b, int panels);

//! Adaptive Simpson quadrature with absolute tolerance `tol`.
//! Recursion stops at `max_depth`, so the result is always finite even for
//! integrands the rule cannot resolve (the remaining error is then bounded
//! by the unresolved panel mass).
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol, int max_depth = 42);

//! Standard normal density.
double normal_pdf(double x);

//! Standard normal distribution function, accurate in both tails.
double normal_cdf(double x);

//! Inverse of the standard normal distribution function (Wichura's AS 241,
//! PPND16 variant; absolute error below 1e-15 on (0,1)).
double inverse_normal_cdf(double p);

} // namespace ikde
