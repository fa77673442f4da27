#include "ikde/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ikde/numeric.hpp"

namespace ikde {

namespace {

// 4096 panels per unit of support radius, i.e. 4097 nodes on [-1,1].
int norm_panels(double radius) {
    const int per_unit = 4096;
    const int units = static_cast<int>(std::ceil(radius));
    return per_unit * std::max(1, units);
}

double rect_fn(double u) { return (u < -1.0 || u > 1.0) ? 0.0 : 0.5; }

double epanechnikov_fn(double u) {
    return (u < -1.0 || u > 1.0) ? 0.0 : 0.75 * (1.0 - u * u);
}

// Order-4 polynomial kernel (9 - 15 u^2)/8 on [-1,1]: unit mass, vanishing
// second moment, fourth moment -3/35.
double order4_fn(double u) {
    return (u < -1.0 || u > 1.0) ? 0.0 : 1.125 - 1.875 * u * u;
}

double gaussian_fn(double u) { return normal_pdf(u); }

} // namespace

Kernel::Kernel(std::string name, int order, KernelFn fn, double support_radius)
    : name_(std::move(name)), order_(order), fn_(fn), radius_(support_radius) {
    if (name_.empty()) throw std::invalid_argument("Kernel: name must be non-empty");
    if (fn_ == nullptr) throw std::invalid_argument("Kernel: evaluation function must be set");
    if (order_ < 1) throw std::invalid_argument("Kernel: order must be >= 1");
    if (!(radius_ > 0.0) || !std::isfinite(radius_)) {
        throw std::invalid_argument("Kernel: support radius must be positive and finite");
    }
    norms_ = compute_norms(*this);
}

KernelNorms compute_norms(const Kernel& kernel, std::span<const double> p_values) {
    const double r = kernel.support_radius();
    const int panels = norm_panels(r);
    // |K| has kinks wherever K changes sign, so L1/Lp integrals use adaptive
    // quadrature; the grid rule would stall near 1e-6 accuracy at those kinks.
    const double tol = 1e-13 * std::max(1.0, r);
    const auto split = [&](const std::function<double(double)>& f) {
        return adaptive_simpson(f, -r, 0.0, 0.5 * tol) +
               adaptive_simpson(f, 0.0, r, 0.5 * tol);
    };
    KernelNorms out;
    out.l1 = split([&](double u) { return std::abs(kernel(u)); });
    out.l2sq = split([&](double u) { double k = kernel(u); return k * k; });
    const double h = 2.0 * r / panels;
    double sup = 0.0;
    for (int i = 0; i <= panels; ++i) {
        sup = std::max(sup, std::abs(kernel(-r + i * h)));
    }
    out.sup = sup;
    for (double p : p_values) {
        if (!(p > 0.0)) throw std::invalid_argument("compute_norms: Lp exponent must be > 0");
        const double ip = split([&](double u) { return std::pow(std::abs(kernel(u)), p); });
        out.lp[p] = std::pow(ip, 1.0 / p);
    }
    return out;
}

double kernel_moment(const Kernel& kernel, int k) {
    if (k < 0) throw std::invalid_argument("kernel_moment: k must be >= 0");
    const double r = kernel.support_radius();
    return simpson([&](double u) { return std::pow(u, k) * kernel(u); }, -r, r,
                   norm_panels(r));
}

bool verify_order(const Kernel& kernel, double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("verify_order: tolerance must be positive");
    if (std::abs(kernel_moment(kernel, 0) - 1.0) > tol) return false;
    for (int k = 1; k < kernel.order(); ++k) {
        if (std::abs(kernel_moment(kernel, k)) > tol) return false;
    }
    return std::abs(kernel_moment(kernel, kernel.order())) > tol;
}

double eval_scaled(const Kernel& kernel, double h, double u) {
    if (!(h > 0.0) || h > 1.0) {
        throw std::invalid_argument("eval_scaled: bandwidth must lie in (0,1]");
    }
    return kernel(u / h) / h;
}

double variance_bound(double sup_density, const Kernel& kernel, std::int64_t n, double h) {
    if (!(sup_density > 0.0)) {
        throw std::invalid_argument("variance_bound: density sup-norm must be positive");
    }
    if (n < 1) throw std::invalid_argument("variance_bound: sample size must be >= 1");
    if (!(h > 0.0) || h > 1.0) {
        throw std::invalid_argument("variance_bound: bandwidth must lie in (0,1]");
    }
    return std::sqrt(sup_density * kernel.norms().l2sq / (static_cast<double>(n) * h));
}

double diff_ratio_integral(const Kernel& kernel, double ratio) {
    if (!(ratio >= 1.0)) {
        throw std::invalid_argument("diff_ratio_integral: ratio h/eta must be >= 1");
    }
    if (ratio == 1.0) return 0.0;
    const double r = kernel.support_radius();
    const double inner = r / ratio;
    // Split at the support edge of the rescaled kernel so each piece is smooth.
    // Outside [-inner, inner] the rescaled term vanishes identically, and using
    // the simplified integrand there keeps the support-edge value of K from
    // leaking into the outer pieces through the Simpson endpoints.
    const auto f_inner = [&](double u) {
        const double d = kernel(u) - ratio * kernel(ratio * u);
        return d * d;
    };
    const auto f_outer = [&](double u) {
        const double k = kernel(u);
        return k * k;
    };
    const int panels = 2048;
    return simpson(f_outer, -r, -inner, panels) + simpson(f_inner, -inner, inner, panels) +
           simpson(f_outer, inner, r, panels);
}

double diff_variance_bound(double sup_density, const Kernel& kernel, std::int64_t n,
                           double h, double eta) {
    if (!(sup_density > 0.0)) {
        throw std::invalid_argument("diff_variance_bound: density sup-norm must be positive");
    }
    if (n < 1) throw std::invalid_argument("diff_variance_bound: sample size must be >= 1");
    if (!(h > 0.0) || h > 1.0 || !(eta > 0.0) || !(eta < h)) {
        throw std::invalid_argument(
            "diff_variance_bound: bandwidths must satisfy 0 < eta < h <= 1");
    }
    return std::sqrt(sup_density * diff_ratio_integral(kernel, h / eta) /
                     (static_cast<double>(n) * h));
}

RatioIntegralCache::RatioIntegralCache(Kernel kernel, double a)
    : kernel_(std::move(kernel)), a_(a) {
    if (!(a_ > 1.0)) {
        throw std::invalid_argument("RatioIntegralCache: grid ratio a must exceed 1");
    }
}

double RatioIntegralCache::at_exponent(int k) const {
    if (k < 0) throw std::invalid_argument("RatioIntegralCache: exponent must be >= 0");
    std::lock_guard<std::mutex> lock(mu_);
    auto it = cache_.find(k);
    if (it != cache_.end()) return it->second;
    const double value = diff_ratio_integral(kernel_, std::pow(a_, k));
    cache_.emplace(k, value);
    return value;
}

const Kernel& rectangular_kernel() {
    static const Kernel k("rectangular", 2, &rect_fn);
    return k;
}

const Kernel& epanechnikov_kernel() {
    static const Kernel k("epanechnikov", 2, &epanechnikov_fn);
    return k;
}

const Kernel& order4_kernel() {
    static const Kernel k("order4", 4, &order4_fn);
    return k;
}

const Kernel& gaussian_kernel() {
    static const Kernel k("gaussian", 2, &gaussian_fn, 9.0);
    return k;
}

const Kernel& kernel_by_name(std::string_view name) {
    if (name == "rectangular") return rectangular_kernel();
    if (name == "epanechnikov") return epanechnikov_kernel();
    if (name == "order4") return order4_kernel();
    if (name == "gaussian") return gaussian_kernel();
    std::string msg = "unknown kernel '";
    msg += name;
    msg += "'; valid kernels:";
    for (const auto& n : kernel_names()) {
        msg += ' ';
        msg += n;
    }
    throw std::invalid_argument(msg);
}

std::vector<std::string> kernel_names() {
    return {"rectangular", "epanechnikov", "order4", "gaussian"};
}

} // namespace ikde
