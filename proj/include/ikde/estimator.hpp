#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "ikde/kernel.hpp"

namespace ikde {

//! Sorted, finite, non-empty sample. Sorting happens once at construction so
//! every estimator call can locate its kernel window by binary search.
class Sample {
  public:
    explicit Sample(std::vector<double> values);

    //! Reads one floating-point value per line. Blank lines are rejected along
    //! with anything else that is not a single finite number
    //! (std::invalid_argument names the line); unreadable files raise
    //! std::runtime_error.
    static Sample from_file(const std::filesystem::path& path);

    std::size_t size() const { return values_.size(); }
    std::span<const double> values() const { return values_; }
    double min() const { return values_.front(); }
    double max() const { return values_.back(); }

    //! Index range [first, last) of sample points inside the closed interval
    //! [lo, hi].
    std::pair<std::size_t, std::size_t> window(double lo, double hi) const;

  private:
    std::vector<double> values_;
};

//! Strictly increasing evaluation abscissas spanning [lo, hi].
struct EvaluationGrid {
    std::vector<double> points;
    double lo = 0.0;
    double hi = 0.0;

    static EvaluationGrid uniform(double lo, double hi, std::size_t count);
    void validate() const;
};

//! Fixed-bandwidth kernel density estimate at x: (1/(n h)) sum K((X_i - x)/h).
//! Only the kernel window [x - h r, x + h r] is visited; terms are accumulated
//! in ascending sample order (compensated above 1e5 terms), so the result
//! matches the naive full-range sum.
double fixed_estimate(const Sample& sample, const Kernel& kernel, double h, double x);

//! Estimate with a spatially varying bandwidth profile h_at(x); every value
//! must lie in (0,1] or std::domain_error names the offending point.
std::vector<double> variable_estimate(const Sample& sample, const Kernel& kernel,
                                      const std::function<double(double)>& h_at,
                                      const EvaluationGrid& grid);

//! Smoothed density value (K_h * f)(x) = int K(u) f(x + u h) du by adaptive
//! quadrature; `splits` lists density irregularities so each quadrature piece
//! is smooth. Absolute tolerance `tol`.
double convolve_density(const std::function<double(double)>& pdf, const Kernel& kernel,
                        double h, double x, std::span<const double> splits = {},
                        double tol = 1e-9);

} // namespace ikde
