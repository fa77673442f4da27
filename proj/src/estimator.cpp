#include "ikde/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <string>

#include "ikde/numeric.hpp"

namespace ikde {

namespace {

// Above this window size the estimator switches to compensated summation.
constexpr std::size_t kCompensationThreshold = 100000;

} // namespace

Sample::Sample(std::vector<double> values) : values_(std::move(values)) {
    if (values_.empty()) throw std::invalid_argument("Sample: sample must be non-empty");
    for (double v : values_) {
        if (!std::isfinite(v)) {
            throw std::invalid_argument("Sample: sample contains a non-finite value");
        }
    }
    std::sort(values_.begin(), values_.end());
}

Sample Sample::from_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("Sample: cannot open '" + path.string() + "'");
    std::vector<double> values;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::size_t consumed = 0;
        double v = 0.0;
        try {
            v = std::stod(line, &consumed);
        } catch (const std::exception&) {
            throw std::invalid_argument("Sample: malformed value at " + path.string() + ":" +
                                        std::to_string(lineno));
        }
        while (consumed < line.size() &&
               (line[consumed] == ' ' || line[consumed] == '\t' || line[consumed] == '\r')) {
            ++consumed;
        }
        if (consumed != line.size() || !std::isfinite(v)) {
            throw std::invalid_argument("Sample: malformed value at " + path.string() + ":" +
                                        std::to_string(lineno));
        }
        values.push_back(v);
    }
    if (in.bad()) throw std::runtime_error("Sample: read failure on '" + path.string() + "'");
    return Sample(std::move(values));
}

std::pair<std::size_t, std::size_t> Sample::window(double lo, double hi) const {
    const auto first = std::lower_bound(values_.begin(), values_.end(), lo);
    const auto last = std::upper_bound(first, values_.end(), hi);
    return {static_cast<std::size_t>(first - values_.begin()),
            static_cast<std::size_t>(last - values_.begin())};
}

EvaluationGrid EvaluationGrid::uniform(double lo, double hi, std::size_t count) {
    if (count < 2) throw std::invalid_argument("EvaluationGrid: need at least 2 points");
    if (!(lo < hi)) throw std::invalid_argument("EvaluationGrid: need lo < hi");
    EvaluationGrid grid;
    grid.lo = lo;
    grid.hi = hi;
    grid.points.resize(count);
    const double step = (hi - lo) / static_cast<double>(count - 1);
    for (std::size_t i = 0; i < count; ++i) {
        grid.points[i] = lo + static_cast<double>(i) * step;
    }
    grid.points.back() = hi;
    return grid;
}

void EvaluationGrid::validate() const {
    if (points.size() < 2) throw std::invalid_argument("EvaluationGrid: need at least 2 points");
    for (std::size_t i = 1; i < points.size(); ++i) {
        if (!(points[i - 1] < points[i])) {
            throw std::invalid_argument("EvaluationGrid: points must be strictly increasing");
        }
    }
    if (points.front() < lo || points.back() > hi) {
        throw std::invalid_argument("EvaluationGrid: points must lie inside [lo, hi]");
    }
}

double fixed_estimate(const Sample& sample, const Kernel& kernel, double h, double x) {
    if (!(h > 0.0) || h > 1.0) {
        throw std::invalid_argument("fixed_estimate: bandwidth must lie in (0,1]");
    }
    const double reach = h * kernel.support_radius();
    const auto [first, last] = sample.window(x - reach, x + reach);
    const std::span<const double> v = sample.values();
    const double inv_h = 1.0 / h;
    double total;
    if (last - first > kCompensationThreshold) {
        KahanSum acc;
        for (std::size_t i = first; i < last; ++i) acc.add(kernel((v[i] - x) * inv_h));
        total = acc.value();
    } else {
        double acc = 0.0;
        for (std::size_t i = first; i < last; ++i) acc += kernel((v[i] - x) * inv_h);
        total = acc;
    }
    return total / (static_cast<double>(sample.size()) * h);
}

std::vector<double> variable_estimate(const Sample& sample, const Kernel& kernel,
                                      const std::function<double(double)>& h_at,
                                      const EvaluationGrid& grid) {
    grid.validate();
    std::vector<double> out;
    out.reserve(grid.points.size());
    for (double x : grid.points) {
        const double h = h_at(x);
        if (!(h > 0.0) || h > 1.0 || !std::isfinite(h)) {
            throw std::domain_error("variable_estimate: bandwidth profile left (0,1] at x=" +
                                    std::to_string(x));
        }
        out.push_back(fixed_estimate(sample, kernel, h, x));
    }
    return out;
}

double convolve_density(const std::function<double(double)>& pdf, const Kernel& kernel,
                        double h, double x, std::span<const double> splits, double tol) {
    if (!(h > 0.0) || h > 1.0) {
        throw std::invalid_argument("convolve_density: bandwidth must lie in (0,1]");
    }
    if (!(tol > 0.0)) throw std::invalid_argument("convolve_density: tolerance must be positive");
    const double r = kernel.support_radius();
    // Integration variable u; density irregularities s map to u = (s - x)/h.
    std::vector<double> cuts;
    cuts.push_back(-r);
    for (double s : splits) {
        const double u = (s - x) / h;
        if (u > -r && u < r) cuts.push_back(u);
    }
    cuts.push_back(r);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    const auto integrand = [&](double u) { return kernel(u) * pdf(x + u * h); };
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double len = cuts[i + 1] - cuts[i];
        if (len <= 0.0) continue;
        total += adaptive_simpson(integrand, cuts[i], cuts[i + 1], tol * len / (2.0 * r));
    }
    return total;
}

} // namespace ikde
