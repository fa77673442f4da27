#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "ikde/estimator.hpp"
#include "ikde/kernel.hpp"

namespace ikde {

struct DensityModel; // defined in models.hpp

enum class SmoothnessKind {
    piecewise_holder,          // Holder-alpha pieces glued at Holder-beta points
    piecewise_differentiable,  // l-times differentiable pieces with |f^(l)| blow-up
    unbounded_density          // x^{-eta}-type explosion at the left support edge
};

//! Smoothness description of a density with finitely many irregularities.
//!  - piecewise_holder: alpha > beta >= 0, Holder constant L, sup-norm M.
//!  - piecewise_differentiable: alpha is the integer piece order l >= 1,
//!    0 <= beta < alpha, gamma > 0 bounds |f^(l)(x)| <= L d(x)^{-gamma}.
//!  - unbounded_density: alpha is the integer piece order l >= 1 and
//!    eta in (0, 1/2) the explosion exponent; irregularities are unused.
struct SmoothnessSpec {
    SmoothnessKind kind = SmoothnessKind::piecewise_holder;
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;
    double eta = 0.0;
    double holder_constant = 0.0; // L
    double sup_bound = 0.0;       // M
    std::vector<double> irregularities; // strictly increasing

    //! c0 = min(1, half the smallest irregularity spacing).
    double c0() const;
    void validate() const;

    //! Flat key=value round trip (kind, alpha, beta, gamma, eta, L, M,
    //! irregularities as a comma-separated list).
    static SmoothnessSpec from_kv(const std::map<std::string, std::string, std::less<>>& kv);
    std::map<std::string, std::string, std::less<>> to_kv() const;
};

std::string to_string(SmoothnessKind kind);
SmoothnessKind smoothness_kind_from_string(std::string_view s);

//! Constant kappa entering the oracle bandwidth:
//!   piecewise_holder:          ||K||_1^2 L^2 / (||K||_2^2 M)
//!   piecewise_differentiable:  L^2 2^{2 gamma} ||K||_1^2 / (||K||_2^2 M)
//! The unbounded kind has no kappa (throws).
double kappa(const SmoothnessSpec& spec, const Kernel& kernel);

//! Oracle bandwidth for piecewise-Holder densities: (kappa n)^{-1/(2 beta+1)}
//! within that distance of an irregularity, the distance itself in the middle
//! zone, and (kappa n)^{-1/(2 alpha+1)} elsewhere. Requires kappa * n > 1;
//! ties at zone boundaries resolve to the smaller bandwidth and the result is
//! clamped into (0, 1].
double h0_piecewise_holder(double x, const SmoothnessSpec& spec, std::int64_t n, double kappa);

//! Oracle bandwidth for piecewise-differentiable densities (two regimes,
//! gamma <= alpha - beta and gamma > alpha - beta), same conventions.
double h0_piecewise_differentiable(double x, const SmoothnessSpec& spec, std::int64_t n,
                                   double kappa);

//! Oracle bandwidth for densities exploding like x^{-eta} at 0; x must be > 0.
double h0_unbounded(double x, const SmoothnessSpec& spec, std::int64_t n);

//! Kind dispatch; computes kappa internally where needed.
double oracle_bandwidth(double x, const SmoothnessSpec& spec, const Kernel& kernel,
                        std::int64_t n);

struct BiasDominanceReport {
    bool bias_dominated = true;
    double max_ratio = 0.0;
    double worst_x = 0.0;
    std::size_t points_checked = 0;
};

//! Verifies |K_{h0(x)} * f - f|(x) <= v(h0(x)) on the grid (ratio tolerance
//! 1 + 1e-6). `kappa_scale` rescales kappa so deliberately distorted
//! smoothness constants can be shown to fail the check.
BiasDominanceReport check_bias_dominated(const DensityModel& model, const SmoothnessSpec& spec,
                                         const Kernel& kernel, std::int64_t n,
                                         const EvaluationGrid& grid, double kappa_scale = 1.0);

} // namespace ikde
