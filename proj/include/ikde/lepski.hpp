#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ikde/estimator.hpp"
#include "ikde/kernel.hpp"

namespace ikde {

struct DensityModel; // defined in models.hpp

//! Geometric bandwidth grid 1, a^-1, ..., a^-J with J = floor(log_a(n/ln^3 n)).
struct BandwidthGrid {
    double a = 2.0;
    int J = 0;
    std::vector<double> values; // descending, values[j] = a^-j

    //! Requires 1 < a <= 2 and n >= ln^3 n (and n >= 2).
    static BandwidthGrid build(std::int64_t n, double a = 2.0);
};

enum class SupNormMode { known_bound, plug_in };

struct SelectorConfig {
    Kernel kernel = order4_kernel();
    double d1 = 1.0;          //!< must be >= 1
    double d2 = 0.4;          //!< must be > 0
    SupNormMode sup_mode = SupNormMode::plug_in;
    double sup_bound = 0.0;   //!< used iff sup_mode == known_bound

    void validate() const;
};

//! lambda(h) = max(1, sqrt(d2 * ln(1/h))).
double lambda_factor(double h, double d2);

//! Plug-in sup-norm: (1 + 1/ln n) * max over a 512-point grid spanning the
//! sample range of the pilot estimate with bandwidth n^{-1/2}. Requires n >= 2.
double estimate_sup_norm(const Sample& sample, const Kernel& kernel);

//! psi(h, eta) = 2 d1 v(h) lambda(h) + v(h, eta) lambda(eta) for eta < h.
double psi_threshold(double h, double eta, double sup_density, const Kernel& kernel,
                     std::int64_t n, double d1, double d2);

struct ComparisonRecord {
    double eta = 0.0;
    double diff = 0.0;      //!< |fhat_h(x) - fhat_eta(x)|
    double threshold = 0.0; //!< psi(h, eta)
    bool violated = false;
};

struct CandidateRecord {
    double h = 0.0;
    bool accepted = false;
    std::vector<ComparisonRecord> comparisons; // rejected candidates stop at the violation
};

struct SelectionTrace {
    double x = 0.0;
    double chosen_h = 0.0;
    bool fallback = false;   //!< selection hit the grid floor after rejections
    double sup_norm = 0.0;   //!< the M actually used in the thresholds
    std::vector<CandidateRecord> candidates;

    std::size_t comparison_count() const;
    //! "x, chosen_h, fallback, n_comparisons"
    std::string to_line() const;
};

//! Pointwise Lepski-type selector bound to one sample: the largest grid
//! bandwidth h whose estimate stays psi-close to every smaller-bandwidth
//! estimate. The smallest grid value accepts vacuously (it has nothing to be
//! compared against), so selection always succeeds; the fallback flag marks
//! selections that reached the grid floor by rejection. Thresholds depend on
//! (h, eta) only, so they are precomputed once per sample and shared by every
//! evaluation point. The referenced sample must outlive the selector.
class LepskiSelector {
  public:
    LepskiSelector(const Sample& sample, SelectorConfig config, BandwidthGrid grid,
                   const RatioIntegralCache* shared_cache = nullptr);

    const BandwidthGrid& grid() const { return grid_; }
    double sup_norm() const { return sup_; }

    //! Selected bandwidth at x; fills `trace` when given.
    double select(double x, SelectionTrace* trace = nullptr) const;

    //! Density estimate at the selected bandwidth (reuses the per-bandwidth
    //! estimates computed during selection). `h_out` receives the bandwidth.
    double estimate_at(double x, double* h_out = nullptr, SelectionTrace* trace = nullptr) const;

  private:
    std::size_t scan(const std::vector<double>& fh, double x, SelectionTrace* trace) const;

    const Sample* sample_;
    SelectorConfig config_;
    BandwidthGrid grid_;
    double sup_ = 0.0;
    std::vector<double> psi_; // flattened (i,j), j > i
};

//! One-shot convenience wrapper around LepskiSelector.
std::pair<double, SelectionTrace> select_bandwidth(const Sample& sample,
                                                   const SelectorConfig& config,
                                                   const BandwidthGrid& grid, double x);

struct PseudoOracleResult {
    double h = 0.0;
    bool fallback = false; //!< no grid bandwidth satisfied the bias condition
};

//! Pseudo-oracle bandwidth: the largest grid h with
//! |K_eta * f - f|(x) <= d1 v(h) lambda(h) for every grid eta <= h, using the
//! true density of `model` (biases by quadrature) and sup-norm `sup_density`.
PseudoOracleResult pseudo_oracle(const DensityModel& model, const Kernel& kernel,
                                 const BandwidthGrid& grid, double d1, double d2,
                                 double sup_density, std::int64_t n, double x);

} // namespace ikde
