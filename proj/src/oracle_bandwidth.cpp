#include "ikde/oracle_bandwidth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "ikde/kv.hpp"
#include "ikde/models.hpp"

namespace ikde {

namespace {

bool is_positive_integer(double v) {
    return v >= 1.0 && v == std::nearbyint(v) && v <= 64.0;
}

double min_irregularity_distance(double x, const std::vector<double>& irr) {
    double d = std::numeric_limits<double>::infinity();
    for (double xi : irr) d = std::min(d, std::abs(x - xi));
    return d;
}

void require_kn(double kappa, std::int64_t n) {
    if (n < 1) throw std::invalid_argument("oracle bandwidth: sample size must be >= 1");
    if (!(kappa > 0.0) || !(kappa * static_cast<double>(n) > 1.0)) {
        throw std::invalid_argument("oracle bandwidth: kappa * n must exceed 1");
    }
}

double clamp_bandwidth(double h) { return std::min(h, 1.0); }

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

double SmoothnessSpec::c0() const {
    double spacing = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < irregularities.size(); ++i) {
        spacing = std::min(spacing, irregularities[i] - irregularities[i - 1]);
    }
    return std::min(1.0, 0.5 * spacing);
}

void SmoothnessSpec::validate() const {
    for (std::size_t i = 1; i < irregularities.size(); ++i) {
        if (!(irregularities[i - 1] < irregularities[i])) {
            throw std::invalid_argument(
                "SmoothnessSpec: irregularities must be strictly increasing");
        }
    }
    if (!(holder_constant > 0.0)) {
        throw std::invalid_argument("SmoothnessSpec: L must be positive");
    }
    if (!(sup_bound > 0.0)) throw std::invalid_argument("SmoothnessSpec: M must be positive");
    switch (kind) {
    case SmoothnessKind::piecewise_holder:
        if (!(alpha > 0.0)) throw std::invalid_argument("SmoothnessSpec: alpha must be > 0");
        if (!(beta >= 0.0) || !(beta < alpha)) {
            throw std::invalid_argument("SmoothnessSpec: need 0 <= beta < alpha");
        }
        break;
    case SmoothnessKind::piecewise_differentiable:
        if (!is_positive_integer(alpha)) {
            throw std::invalid_argument("SmoothnessSpec: piece order alpha must be an integer >= 1");
        }
        if (!(beta >= 0.0) || !(beta < alpha)) {
            throw std::invalid_argument("SmoothnessSpec: need 0 <= beta < alpha");
        }
        if (!(gamma > 0.0)) throw std::invalid_argument("SmoothnessSpec: gamma must be > 0");
        break;
    case SmoothnessKind::unbounded_density:
        if (!is_positive_integer(alpha)) {
            throw std::invalid_argument("SmoothnessSpec: piece order alpha must be an integer >= 1");
        }
        if (!(eta > 0.0) || !(eta < 0.5)) {
            throw std::invalid_argument("SmoothnessSpec: need eta in (0, 1/2)");
        }
        break;
    }
}

std::string to_string(SmoothnessKind kind) {
    switch (kind) {
    case SmoothnessKind::piecewise_holder: return "piecewise_holder";
    case SmoothnessKind::piecewise_differentiable: return "piecewise_differentiable";
    case SmoothnessKind::unbounded_density: return "unbounded_density";
    }
    return "piecewise_holder";
}

SmoothnessKind smoothness_kind_from_string(std::string_view s) {
    if (s == "piecewise_holder") return SmoothnessKind::piecewise_holder;
    if (s == "piecewise_differentiable") return SmoothnessKind::piecewise_differentiable;
    if (s == "unbounded_density") return SmoothnessKind::unbounded_density;
    throw std::invalid_argument(
        "unknown smoothness kind '" + std::string(s) +
        "'; valid kinds: piecewise_holder piecewise_differentiable unbounded_density");
}

SmoothnessSpec SmoothnessSpec::from_kv(const KvMap& kv) {
    kv_require_known_keys(kv, {"kind", "alpha", "beta", "gamma", "eta", "L", "M", "irregularities"},
                          "smoothness spec");
    SmoothnessSpec spec;
    spec.kind = smoothness_kind_from_string(kv_string(kv, "kind"));
    spec.alpha = kv_double(kv, "alpha");
    spec.beta = kv_double_or(kv, "beta", 0.0);
    spec.gamma = kv_double_or(kv, "gamma", 0.0);
    spec.eta = kv_double_or(kv, "eta", 0.0);
    // L and M do not enter the unbounded-density bandwidth; default them so
    // such spec files can omit them.
    const double lm_fallback = (spec.kind == SmoothnessKind::unbounded_density) ? 1.0 : 0.0;
    spec.holder_constant = kv_double_or(kv, "L", lm_fallback);
    spec.sup_bound = kv_double_or(kv, "M", lm_fallback);
    if (kv.find("irregularities") != kv.end()) {
        spec.irregularities = kv_double_list(kv, "irregularities");
    }
    spec.validate();
    return spec;
}

KvMap SmoothnessSpec::to_kv() const {
    KvMap kv;
    kv["kind"] = to_string(kind);
    kv["alpha"] = format_double(alpha);
    kv["L"] = format_double(holder_constant);
    kv["M"] = format_double(sup_bound);
    if (kind != SmoothnessKind::unbounded_density) kv["beta"] = format_double(beta);
    if (kind == SmoothnessKind::piecewise_differentiable) kv["gamma"] = format_double(gamma);
    if (kind == SmoothnessKind::unbounded_density) kv["eta"] = format_double(eta);
    if (!irregularities.empty()) {
        std::string list;
        for (std::size_t i = 0; i < irregularities.size(); ++i) {
            if (i > 0) list += ", ";
            list += format_double(irregularities[i]);
        }
        kv["irregularities"] = list;
    }
    return kv;
}

double kappa(const SmoothnessSpec& spec, const Kernel& kernel) {
    spec.validate();
    const KernelNorms& norms = kernel.norms();
    const double l1sq = norms.l1 * norms.l1;
    const double L2 = spec.holder_constant * spec.holder_constant;
    switch (spec.kind) {
    case SmoothnessKind::piecewise_holder:
        return l1sq * L2 / (norms.l2sq * spec.sup_bound);
    case SmoothnessKind::piecewise_differentiable:
        return L2 * std::pow(2.0, 2.0 * spec.gamma) * l1sq / (norms.l2sq * spec.sup_bound);
    case SmoothnessKind::unbounded_density:
        throw std::invalid_argument("kappa: undefined for unbounded_density specs");
    }
    throw std::invalid_argument("kappa: unknown smoothness kind");
}

double h0_piecewise_holder(double x, const SmoothnessSpec& spec, std::int64_t n, double kappa) {
    if (spec.kind != SmoothnessKind::piecewise_holder) {
        throw std::invalid_argument("h0_piecewise_holder: spec kind mismatch");
    }
    spec.validate();
    require_kn(kappa, n);
    const double kn = kappa * static_cast<double>(n);
    const double t_beta = std::pow(kn, -1.0 / (2.0 * spec.beta + 1.0));
    const double t_alpha = std::pow(kn, -1.0 / (2.0 * spec.alpha + 1.0));
    if (spec.irregularities.empty()) return clamp_bandwidth(t_alpha);
    const double d = min_irregularity_distance(x, spec.irregularities);
    if (d <= t_beta) return clamp_bandwidth(t_beta);
    if (d <= t_alpha) return clamp_bandwidth(d);
    return clamp_bandwidth(t_alpha);
}

double h0_piecewise_differentiable(double x, const SmoothnessSpec& spec, std::int64_t n,
                                   double kappa) {
    if (spec.kind != SmoothnessKind::piecewise_differentiable) {
        throw std::invalid_argument("h0_piecewise_differentiable: spec kind mismatch");
    }
    spec.validate();
    require_kn(kappa, n);
    const double kn = kappa * static_cast<double>(n);
    const double l = spec.alpha;
    const double far = 0.5 * std::pow(kn, -1.0 / (2.0 * l + 1.0));
    if (spec.irregularities.empty()) return clamp_bandwidth(far);
    const double d = min_irregularity_distance(x, spec.irregularities);
    const double c0 = spec.c0();
    const double mid = (d <= 0.0)
                           ? 0.0
                           : 0.5 * std::pow(kn, -1.0 / (2.0 * l + 1.0)) *
                                 std::pow(d, 2.0 * spec.gamma / (2.0 * l + 1.0));
    if (spec.gamma <= l - spec.beta) {
        const double t1 = std::pow(kn, -1.0 / (2.0 * spec.beta + 1.0));
        const double t2 = std::pow(kn, -1.0 / (2.0 * (l - spec.gamma) + 1.0));
        if (d <= t1) return clamp_bandwidth(0.5 * t1);
        if (d <= t2) return clamp_bandwidth(0.5 * d);
        if (d <= c0) return clamp_bandwidth(mid);
        return clamp_bandwidth(far);
    }
    const double t0 =
        std::pow(kn, -((l - spec.beta) / spec.gamma) / (2.0 * spec.beta + 1.0));
    if (d <= t0) return clamp_bandwidth(0.5 * std::pow(kn, -1.0 / (2.0 * spec.beta + 1.0)));
    if (d <= c0) return clamp_bandwidth(mid);
    return clamp_bandwidth(far);
}

double h0_unbounded(double x, const SmoothnessSpec& spec, std::int64_t n) {
    if (spec.kind != SmoothnessKind::unbounded_density) {
        throw std::invalid_argument("h0_unbounded: spec kind mismatch");
    }
    spec.validate();
    if (n < 1) throw std::invalid_argument("h0_unbounded: sample size must be >= 1");
    if (!(x > 0.0)) {
        throw std::invalid_argument("h0_unbounded: x must be positive");
    }
    const double nn = static_cast<double>(n);
    const double l = spec.alpha;
    const double x_star = std::pow(2.0 * nn, -1.0 / (1.0 - spec.eta));
    double h;
    if (x <= x_star) {
        h = std::pow(x, 2.0 * spec.eta) / nn;
    } else if (x <= 1.0) {
        h = std::pow(std::pow(x, spec.eta + 2.0 * l) / nn, 1.0 / (2.0 * l + 1.0));
    } else {
        h = std::pow(nn, -1.0 / (2.0 * l + 1.0));
    }
    return clamp_bandwidth(h);
}

double oracle_bandwidth(double x, const SmoothnessSpec& spec, const Kernel& kernel,
                        std::int64_t n) {
    switch (spec.kind) {
    case SmoothnessKind::piecewise_holder:
        return h0_piecewise_holder(x, spec, n, kappa(spec, kernel));
    case SmoothnessKind::piecewise_differentiable:
        return h0_piecewise_differentiable(x, spec, n, kappa(spec, kernel));
    case SmoothnessKind::unbounded_density:
        return h0_unbounded(x, spec, n);
    }
    throw std::invalid_argument("oracle_bandwidth: unknown smoothness kind");
}

BiasDominanceReport check_bias_dominated(const DensityModel& model, const SmoothnessSpec& spec,
                                         const Kernel& kernel, std::int64_t n,
                                         const EvaluationGrid& grid, double kappa_scale) {
    spec.validate();
    grid.validate();
    if (!(kappa_scale > 0.0)) {
        throw std::invalid_argument("check_bias_dominated: kappa_scale must be positive");
    }
    double kap = 0.0;
    if (spec.kind != SmoothnessKind::unbounded_density) {
        kap = kappa(spec, kernel) * kappa_scale;
    }
    BiasDominanceReport report;
    report.points_checked = grid.points.size();
    const std::span<const double> splits(model.irregularities);
    for (double x : grid.points) {
        double h0;
        switch (spec.kind) {
        case SmoothnessKind::piecewise_holder:
            h0 = h0_piecewise_holder(x, spec, n, kap);
            break;
        case SmoothnessKind::piecewise_differentiable:
            h0 = h0_piecewise_differentiable(x, spec, n, kap);
            break;
        default:
            h0 = h0_unbounded(x, spec, n);
            break;
        }
        const double smoothed = convolve_density(model.pdf, kernel, h0, x, splits);
        const double bias = std::abs(smoothed - model.pdf(x));
        const double v = variance_bound(spec.sup_bound, kernel, n, h0);
        const double ratio = bias / v;
        if (ratio > report.max_ratio) {
            report.max_ratio = ratio;
            report.worst_x = x;
        }
    }
    report.bias_dominated = report.max_ratio <= 1.0 + 1e-6;
    return report;
}

} // namespace ikde
