#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ikde/estimator.hpp"
#include "ikde/oracle_bandwidth.hpp"
#include "ikde/rng.hpp"

namespace ikde {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    double length() const { return hi - lo; }
};

//! A simulation density: pdf, exact sampler, irregularity locations, the
//! default risk interval I0, and (where meaningful) a smoothness description
//! driving the oracle bandwidth. `l2sq_default_i0` caches the squared L2 norm
//! of the pdf over the default I0, the denominator of the normalized risk.
struct DensityModel {
    std::string name;
    std::function<double(double)> pdf;
    std::function<double(Rng&)> draw;
    Interval support;
    std::vector<double> irregularities;
    Interval default_i0;
    std::optional<SmoothnessSpec> smoothness;
    double l2sq_default_i0 = 0.0;
};

//! Registry lookup; throws std::invalid_argument listing the valid names.
const DensityModel& make_model(std::string_view name);
std::vector<std::string> model_names();

//! n inverse-CDF (or rejection, for the oscillating model) draws with a fresh
//! engine seeded by `seed`; the result is sorted by the Sample constructor.
Sample draw_sample(const DensityModel& model, std::uint64_t seed, std::size_t n);

//! int_{I0} f^2 by adaptive quadrature split at the model irregularities.
double pdf_l2sq(const DensityModel& model, Interval i0);

} // namespace ikde
