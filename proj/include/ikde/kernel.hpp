#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ikde {

//! Stateless kernel shape function. Built-in kernels are plain functions, so
//! evaluation in the estimator's inner loops stays a direct call.
using KernelFn = double (*)(double);

//! Integral norms of a kernel. `lp` holds (p -> Lp norm) for every p that was
//! explicitly requested from compute_norms; `l1` is the norm of |K|, which for
//! sign-changing kernels exceeds the (unit) integral of K itself.
struct KernelNorms {
    double l1 = 0.0;
    double l2sq = 0.0;
    double sup = 0.0;
    std::map<double, double> lp;
};

//! A symmetric kernel supported on [-support_radius, support_radius] together
//! with its declared order (first non-vanishing moment). Immutable after
//! construction; the support clamp makes evaluate() exactly zero outside the
//! support so windowed and full-range sums agree bit for bit.
class Kernel {
  public:
    Kernel(std::string name, int order, KernelFn fn, double support_radius = 1.0);

    double operator()(double u) const {
        return (u < -radius_ || u > radius_) ? 0.0 : fn_(u);
    }

    const std::string& name() const { return name_; }
    int order() const { return order_; }
    double support_radius() const { return radius_; }
    bool compact_unit_support() const { return radius_ == 1.0; }

    //! Norms over the support, cached at construction (no Lp extras).
    const KernelNorms& norms() const { return norms_; }

  private:
    std::string name_;
    int order_;
    KernelFn fn_;
    double radius_;
    KernelNorms norms_;
};

//! L1 / L2^2 / sup norms by composite Simpson on 4097 fixed nodes per unit of
//! support radius; additional Lp norms for each requested p > 0.
KernelNorms compute_norms(const Kernel& kernel, std::span<const double> p_values = {});

//! k-th moment of the kernel over its support.
double kernel_moment(const Kernel& kernel, int k);

//! Checks the declared order: unit mass, vanishing moments 1..order-1 and a
//! non-vanishing moment at `order`, all against absolute tolerance `tol`.
bool verify_order(const Kernel& kernel, double tol = 1e-8);

//! Scaled evaluation K_h(u) = K(u/h)/h for h in (0,1].
double eval_scaled(const Kernel& kernel, double h, double u);

//! Variance proxy v(h) = sqrt(sup_density * ||K||_2^2 / (n h)).
double variance_bound(double sup_density, const Kernel& kernel, std::int64_t n, double h);

//! I(r) = int (K(u) - r K(r u))^2 du for a bandwidth ratio r = h/eta >= 1.
//! The integrand is split at +-radius/r so piecewise-polynomial kernels are
//! integrated exactly.
double diff_ratio_integral(const Kernel& kernel, double ratio);

//! v(h,eta) = sqrt(sup_density * I(h/eta) / (n h)) for eta < h.
double diff_variance_bound(double sup_density, const Kernel& kernel, std::int64_t n,
                           double h, double eta);

//! Thread-safe cache of diff_ratio_integral over ratios a^k on a geometric
//! bandwidth grid, keyed by the integer exponent k >= 0.
class RatioIntegralCache {
  public:
    RatioIntegralCache(Kernel kernel, double a);

    double at_exponent(int k) const;
    const Kernel& kernel() const { return kernel_; }
    double a() const { return a_; }

  private:
    Kernel kernel_;
    double a_;
    mutable std::mutex mu_;
    mutable std::map<int, double> cache_;
};

//! Built-in kernels. The Gaussian kernel is intended for the fixed-bandwidth
//! comparator only: it is not compactly supported, so it is truncated at
//! |u| <= 9 where the discarded mass is below 1e-18.
const Kernel& rectangular_kernel();
const Kernel& epanechnikov_kernel();
const Kernel& order4_kernel();
const Kernel& gaussian_kernel();

//! Lookup by name ("rectangular", "epanechnikov", "order4", "gaussian");
//! throws std::invalid_argument listing the valid names otherwise.
const Kernel& kernel_by_name(std::string_view name);
std::vector<std::string> kernel_names();

} // namespace ikde
