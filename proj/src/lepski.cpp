#include "ikde/lepski.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "ikde/models.hpp"

namespace ikde {

BandwidthGrid BandwidthGrid::build(std::int64_t n, double a) {
    if (!(a > 1.0) || !(a <= 2.0)) {
        throw std::invalid_argument("BandwidthGrid: grid ratio a must lie in (1, 2]");
    }
    if (n < 2) throw std::invalid_argument("BandwidthGrid: sample size must be >= 2");
    const double nn = static_cast<double>(n);
    const double ln3 = std::pow(std::log(nn), 3.0);
    if (nn < ln3) {
        throw std::invalid_argument("BandwidthGrid: need n >= ln^3 n (n=" + std::to_string(n) +
                                    " is too small)");
    }
    BandwidthGrid grid;
    grid.a = a;
    grid.J = static_cast<int>(std::floor(std::log(nn / ln3) / std::log(a)));
    grid.values.resize(grid.J + 1);
    for (int j = 0; j <= grid.J; ++j) grid.values[j] = std::pow(a, -j);
    return grid;
}

void SelectorConfig::validate() const {
    if (!(d1 >= 1.0)) throw std::invalid_argument("SelectorConfig: d1 must be >= 1");
    if (!(d2 > 0.0)) throw std::invalid_argument("SelectorConfig: d2 must be > 0");
    if (sup_mode == SupNormMode::known_bound && !(sup_bound > 0.0)) {
        throw std::invalid_argument("SelectorConfig: known sup-norm bound must be positive");
    }
}

double lambda_factor(double h, double d2) {
    if (!(h > 0.0) || h > 1.0) {
        throw std::invalid_argument("lambda_factor: bandwidth must lie in (0,1]");
    }
    if (!(d2 > 0.0)) throw std::invalid_argument("lambda_factor: d2 must be > 0");
    return std::max(1.0, std::sqrt(d2 * std::log(1.0 / h)));
}

double estimate_sup_norm(const Sample& sample, const Kernel& kernel) {
    const std::size_t n = sample.size();
    if (n < 2) throw std::invalid_argument("estimate_sup_norm: need at least 2 observations");
    const double h = 1.0 / std::sqrt(static_cast<double>(n));
    const double lo = sample.min();
    const double hi = sample.max();
    const int points = 512;
    double best = 0.0;
    if (lo == hi) {
        best = fixed_estimate(sample, kernel, h, lo);
    } else {
        const double step = (hi - lo) / (points - 1);
        for (int i = 0; i < points; ++i) {
            best = std::max(best, fixed_estimate(sample, kernel, h, lo + i * step));
        }
    }
    return (1.0 + 1.0 / std::log(static_cast<double>(n))) * best;
}

double psi_threshold(double h, double eta, double sup_density, const Kernel& kernel,
                     std::int64_t n, double d1, double d2) {
    if (!(eta < h)) throw std::invalid_argument("psi_threshold: need eta < h");
    if (!(d1 >= 1.0)) throw std::invalid_argument("psi_threshold: d1 must be >= 1");
    return 2.0 * d1 * variance_bound(sup_density, kernel, n, h) * lambda_factor(h, d2) +
           diff_variance_bound(sup_density, kernel, n, h, eta) * lambda_factor(eta, d2);
}

std::size_t SelectionTrace::comparison_count() const {
    std::size_t count = 0;
    for (const auto& c : candidates) count += c.comparisons.size();
    return count;
}

std::string SelectionTrace::to_line() const {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "%.17g, %.17g, %d, %zu", x, chosen_h,
                  fallback ? 1 : 0, comparison_count());
    return buf;
}

LepskiSelector::LepskiSelector(const Sample& sample, SelectorConfig config, BandwidthGrid grid,
                               const RatioIntegralCache* shared_cache)
    : sample_(&sample), config_(std::move(config)), grid_(std::move(grid)) {
    config_.validate();
    if (grid_.values.empty()) throw std::invalid_argument("LepskiSelector: empty grid");
    if (shared_cache != nullptr && (shared_cache->a() != grid_.a ||
                                    shared_cache->kernel().name() != config_.kernel.name())) {
        throw std::invalid_argument("LepskiSelector: shared cache built for a different grid");
    }
    sup_ = (config_.sup_mode == SupNormMode::known_bound)
               ? config_.sup_bound
               : estimate_sup_norm(sample, config_.kernel);
    // psi(h_i, h_j) depends on x only through the sample, so the whole
    // threshold table is shared by every evaluation point.
    const std::int64_t n = static_cast<std::int64_t>(sample.size());
    const std::size_t m = grid_.values.size();
    psi_.assign(m * m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        const double h = grid_.values[i];
        const double vh = variance_bound(sup_, config_.kernel, n, h);
        const double head = 2.0 * config_.d1 * vh * lambda_factor(h, config_.d2);
        for (std::size_t j = i + 1; j < m; ++j) {
            const double eta = grid_.values[j];
            const double integral = shared_cache != nullptr
                                        ? shared_cache->at_exponent(static_cast<int>(j - i))
                                        : diff_ratio_integral(config_.kernel, h / eta);
            const double v_diff = std::sqrt(sup_ * integral / (static_cast<double>(n) * h));
            psi_[i * m + j] = head + v_diff * lambda_factor(eta, config_.d2);
        }
    }
}

std::size_t LepskiSelector::scan(const std::vector<double>& fh, double x,
                                 SelectionTrace* trace) const {
    const std::size_t m = grid_.values.size();
    if (trace != nullptr) {
        trace->x = x;
        trace->sup_norm = sup_;
        trace->candidates.clear();
    }
    std::size_t chosen = m - 1;
    for (std::size_t i = 0; i < m; ++i) {
        bool accepted = true;
        CandidateRecord record;
        if (trace != nullptr) record.h = grid_.values[i];
        for (std::size_t j = i + 1; j < m; ++j) {
            const double diff = std::abs(fh[i] - fh[j]);
            const double threshold = psi_[i * m + j];
            const bool violated = diff > threshold;
            if (trace != nullptr) {
                record.comparisons.push_back({grid_.values[j], diff, threshold, violated});
            }
            if (violated) {
                accepted = false;
                break;
            }
        }
        if (trace != nullptr) {
            record.accepted = accepted;
            trace->candidates.push_back(std::move(record));
        }
        if (accepted) {
            chosen = i;
            break;
        }
    }
    if (trace != nullptr) {
        trace->chosen_h = grid_.values[chosen];
        trace->fallback = (chosen == m - 1) && (m > 1);
    }
    return chosen;
}

double LepskiSelector::select(double x, SelectionTrace* trace) const {
    std::vector<double> fh(grid_.values.size());
    for (std::size_t j = 0; j < fh.size(); ++j) {
        fh[j] = fixed_estimate(*sample_, config_.kernel, grid_.values[j], x);
    }
    return grid_.values[scan(fh, x, trace)];
}

double LepskiSelector::estimate_at(double x, double* h_out, SelectionTrace* trace) const {
    std::vector<double> fh(grid_.values.size());
    for (std::size_t j = 0; j < fh.size(); ++j) {
        fh[j] = fixed_estimate(*sample_, config_.kernel, grid_.values[j], x);
    }
    const std::size_t chosen = scan(fh, x, trace);
    if (h_out != nullptr) *h_out = grid_.values[chosen];
    return fh[chosen];
}

std::pair<double, SelectionTrace> select_bandwidth(const Sample& sample,
                                                   const SelectorConfig& config,
                                                   const BandwidthGrid& grid, double x) {
    LepskiSelector selector(sample, config, grid);
    SelectionTrace trace;
    const double h = selector.select(x, &trace);
    return {h, std::move(trace)};
}

PseudoOracleResult pseudo_oracle(const DensityModel& model, const Kernel& kernel,
                                 const BandwidthGrid& grid, double d1, double d2,
                                 double sup_density, std::int64_t n, double x) {
    if (!(d1 >= 1.0)) throw std::invalid_argument("pseudo_oracle: d1 must be >= 1");
    if (grid.values.empty()) throw std::invalid_argument("pseudo_oracle: empty grid");
    const double fx = model.pdf(x);
    const std::span<const double> splits(model.irregularities);
    std::vector<double> bias(grid.values.size());
    for (std::size_t j = 0; j < grid.values.size(); ++j) {
        bias[j] = std::abs(convolve_density(model.pdf, kernel, grid.values[j], x, splits) - fx);
    }
    for (std::size_t i = 0; i < grid.values.size(); ++i) {
        const double h = grid.values[i];
        const double threshold =
            d1 * variance_bound(sup_density, kernel, n, h) * lambda_factor(h, d2);
        bool ok = true;
        for (std::size_t j = i; j < grid.values.size(); ++j) {
            if (bias[j] > threshold) {
                ok = false;
                break;
            }
        }
        if (ok) return {h, false};
    }
    return {grid.values.back(), true};
}

} // namespace ikde
