#include "doctest.h"

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "ikde/estimator.hpp"
#include "ikde/kernel.hpp"
#include "ikde/lepski.hpp"
#include "ikde/models.hpp"
#include "ikde/rng.hpp"

using namespace ikde;

namespace {

struct BruteResult {
    double h = 0.0;
    double estimate = 0.0;
    bool fallback = false;
};

//! Independent reference selector: literal scan over all grid pairs using the
//! public psi_threshold, largest bandwidth first.
BruteResult brute_select(const Sample& sample, const SelectorConfig& cfg,
                         const BandwidthGrid& grid, double x) {
    const double sup = cfg.sup_mode == SupNormMode::known_bound
                           ? cfg.sup_bound
                           : estimate_sup_norm(sample, cfg.kernel);
    const std::size_t m = grid.values.size();
    const auto n = static_cast<std::int64_t>(sample.size());
    std::vector<double> fh(m);
    for (std::size_t j = 0; j < m; ++j) {
        fh[j] = fixed_estimate(sample, cfg.kernel, grid.values[j], x);
    }
    std::size_t chosen = m - 1;
    for (std::size_t i = 0; i < m; ++i) {
        bool ok = true;
        for (std::size_t j = i + 1; j < m; ++j) {
            const double psi = psi_threshold(grid.values[i], grid.values[j], sup, cfg.kernel, n,
                                             cfg.d1, cfg.d2);
            if (std::abs(fh[i] - fh[j]) > psi) {
                ok = false;
                break;
            }
        }
        if (ok) {
            chosen = i;
            break;
        }
    }
    return {grid.values[chosen], fh[chosen], chosen == m - 1 && m > 1};
}

} // namespace

TEST_CASE("bandwidth grid sizes and domain") {
    const BandwidthGrid g = BandwidthGrid::build(1024, 2.0);
    CHECK(g.J == 1);
    REQUIRE(g.values.size() == 2);
    CHECK(g.values[0] == 1.0);
    CHECK(g.values[1] == 0.5);

    // n must dominate ln^3 n
    CHECK_THROWS_AS(BandwidthGrid::build(93, 2.0), std::invalid_argument);
    CHECK_NOTHROW(BandwidthGrid::build(94, 2.0));
    CHECK_THROWS_AS(BandwidthGrid::build(7, 2.0), std::invalid_argument);
    CHECK_NOTHROW(BandwidthGrid::build(6, 2.0));
    CHECK(BandwidthGrid::build(6, 2.0).values.size() == 1); // {1}

    CHECK_THROWS_AS(BandwidthGrid::build(1024, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(BandwidthGrid::build(1024, 2.5), std::invalid_argument);
    CHECK_THROWS_AS(BandwidthGrid::build(1, 2.0), std::invalid_argument);

    // a closer to 1 gives a finer, deeper grid
    const BandwidthGrid fine = BandwidthGrid::build(100000, 1.3);
    CHECK(fine.values.size() > BandwidthGrid::build(100000, 2.0).values.size());
    for (std::size_t j = 1; j < fine.values.size(); ++j) {
        CHECK(fine.values[j] < fine.values[j - 1]);
        CHECK(fine.values[j] == std::pow(1.3, -static_cast<double>(j)));
    }
}

TEST_CASE("lambda factor clamps at one") {
    CHECK(lambda_factor(0.125, 0.4) == 1.0); // raw value 0.912...
    CHECK(lambda_factor(1.0, 0.4) == 1.0);
    CHECK(lambda_factor(std::exp(-10.0), 0.4) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(lambda_factor(std::exp(-10.0), 0.9) == doctest::Approx(3.0).epsilon(1e-12));
    CHECK_THROWS_AS(lambda_factor(0.0, 0.4), std::invalid_argument);
    CHECK_THROWS_AS(lambda_factor(1.5, 0.4), std::invalid_argument);
    CHECK_THROWS_AS(lambda_factor(0.5, 0.0), std::invalid_argument);
}

TEST_CASE("plug-in sup norm lands near the true sup for uniform data") {
    const Sample s = draw_sample(make_model("uniform"), 31, 10000);
    const double m1 = estimate_sup_norm(s, order4_kernel());
    const double m2 = estimate_sup_norm(s, order4_kernel());
    CHECK(m1 == m2); // deterministic
    CHECK(m1 > 0.4);
    CHECK(m1 < 0.8);
    Sample tiny(std::vector<double>{0.5});
    CHECK_THROWS_AS(estimate_sup_norm(tiny, order4_kernel()), std::invalid_argument);
}

TEST_CASE("selector config validation") {
    SelectorConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    cfg.d1 = 0.5;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = SelectorConfig{};
    cfg.d2 = 0.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = SelectorConfig{};
    cfg.sup_mode = SupNormMode::known_bound;
    cfg.sup_bound = 0.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.sup_bound = 0.5;
    CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("psi threshold frozen rectangular case") {
    // M=1, n=100, h=1/2, eta=1/4, d1=1, d2=0.4: both lambdas clamp to 1,
    // v(h) = 0.1 and v(h,eta) = 0.1, so psi = 2*0.1 + 0.1 = 0.3.
    const double psi = psi_threshold(0.5, 0.25, 1.0, rectangular_kernel(), 100, 1.0, 0.4);
    CHECK(psi == doctest::Approx(0.3).epsilon(1e-12));
    CHECK_THROWS_AS(psi_threshold(0.25, 0.5, 1.0, rectangular_kernel(), 100, 1.0, 0.4),
                    std::invalid_argument);
}

TEST_CASE("selector matches the brute-force scan exactly (shared cache, a = 2)") {
    Rng rng(1234);
    const char* names[] = {"gaussian", "uniform", "laplace", "sym_exponential",
                           "gaussian_mixture"};
    const std::size_t sizes[] = {100, 250, 617, 1024, 2500, 5000};
    const RatioIntegralCache cache(order4_kernel(), 2.0);
    for (int inst = 0; inst < 30; ++inst) {
        const DensityModel& model = make_model(names[inst % 5]);
        const std::size_t n = sizes[inst % 6];
        const Sample sample = draw_sample(model, 1000 + static_cast<std::uint64_t>(inst), n);
        SelectorConfig cfg;
        if (inst % 3 == 0) {
            cfg.sup_mode = SupNormMode::known_bound;
            cfg.sup_bound = 1.5;
        }
        const BandwidthGrid grid = BandwidthGrid::build(static_cast<std::int64_t>(n), 2.0);
        const LepskiSelector selector(sample, cfg, grid, &cache);
        const double x =
            model.default_i0.lo + model.default_i0.length() * rng.uniform();
        const BruteResult want = brute_select(sample, cfg, grid, x);
        SelectionTrace trace;
        double h = 0.0;
        const double est = selector.estimate_at(x, &h, &trace);
        CHECK(h == want.h);
        CHECK(est == want.estimate);
        CHECK(trace.fallback == want.fallback);
    }
}

TEST_CASE("one-shot wrapper matches brute force for a non-dyadic grid ratio") {
    Rng rng(77);
    for (int inst = 0; inst < 15; ++inst) {
        const DensityModel& model = make_model(inst % 2 == 0 ? "laplace" : "uniform");
        const std::size_t n = 300 + 150 * static_cast<std::size_t>(inst);
        const Sample sample = draw_sample(model, 50 + static_cast<std::uint64_t>(inst), n);
        SelectorConfig cfg;
        const BandwidthGrid grid = BandwidthGrid::build(static_cast<std::int64_t>(n), 1.7);
        const double x = model.default_i0.lo + model.default_i0.length() * rng.uniform();
        const auto [h, trace] = select_bandwidth(sample, cfg, grid, x);
        const BruteResult want = brute_select(sample, cfg, grid, x);
        CHECK(h == want.h);
        CHECK(trace.chosen_h == want.h);
        CHECK(trace.fallback == want.fallback);
    }
}

TEST_CASE("trace thresholds reproduce psi_threshold bit for bit") {
    const Sample sample = draw_sample(make_model("laplace"), 4, 2000);
    SelectorConfig cfg;
    const BandwidthGrid grid = BandwidthGrid::build(2000, 2.0);
    const RatioIntegralCache cache(order4_kernel(), 2.0);
    const LepskiSelector selector(sample, cfg, grid, &cache);
    SelectionTrace trace;
    selector.select(0.25, &trace);
    CHECK(trace.sup_norm == selector.sup_norm());
    REQUIRE(!trace.candidates.empty());
    std::size_t total = 0;
    for (const CandidateRecord& cand : trace.candidates) {
        for (const ComparisonRecord& rec : cand.comparisons) {
            const double psi = psi_threshold(cand.h, rec.eta, selector.sup_norm(), cfg.kernel,
                                             2000, cfg.d1, cfg.d2);
            CHECK(rec.threshold == psi);
            CHECK(rec.violated == (rec.diff > rec.threshold));
            ++total;
        }
    }
    CHECK(trace.comparison_count() == total);
    CHECK(trace.x == 0.25);
    const std::string line = trace.to_line();
    // 0.25 is exactly representable, so %.17g prints it verbatim
    CHECK(line.find("0.25") != std::string::npos);
}

TEST_CASE("atomic sample forces the selector to the grid floor") {
    // every observation at the origin: small bandwidths blow up at x = 0 and
    // every candidate above the floor is rejected
    Sample spike(std::vector<double>(2000, 0.0));
    SelectorConfig cfg;
    const BandwidthGrid grid = BandwidthGrid::build(2000, 2.0);
    REQUIRE(grid.values.size() == 3); // {1, 1/2, 1/4}
    const LepskiSelector selector(spike, cfg, grid);
    SelectionTrace trace;
    const double h = selector.select(0.0, &trace);
    CHECK(h == grid.values.back());
    CHECK(trace.fallback);
    const std::string line = trace.to_line();
    CHECK(line.find(", 1, ") != std::string::npos); // fallback flag printed as 1
}

TEST_CASE("far from the data every estimate vanishes and the largest bandwidth wins") {
    const Sample s = draw_sample(make_model("uniform"), 8, 2000);
    SelectorConfig cfg;
    const BandwidthGrid grid = BandwidthGrid::build(2000, 2.0);
    const LepskiSelector selector(s, cfg, grid);
    SelectionTrace trace;
    double h = 0.0;
    const double est = selector.estimate_at(50.0, &h, &trace);
    CHECK(h == 1.0);
    CHECK(est == 0.0);
    CHECK_FALSE(trace.fallback);
}

TEST_CASE("selector rejects a mismatched shared cache") {
    const Sample s = draw_sample(make_model("uniform"), 8, 500);
    SelectorConfig cfg;
    const BandwidthGrid grid = BandwidthGrid::build(500, 2.0);
    const RatioIntegralCache wrong_a(order4_kernel(), 1.5);
    CHECK_THROWS_AS(LepskiSelector(s, cfg, grid, &wrong_a), std::invalid_argument);
    const RatioIntegralCache wrong_kernel(rectangular_kernel(), 2.0);
    CHECK_THROWS_AS(LepskiSelector(s, cfg, grid, &wrong_kernel), std::invalid_argument);
}

TEST_CASE("pseudo oracle on the uniform density") {
    const DensityModel& model = make_model("uniform");
    const BandwidthGrid grid = BandwidthGrid::build(10000, 2.0);
    REQUIRE(grid.values.size() == 4); // {1, 1/2, 1/4, 1/8}

    // interior: the kernel window stays inside the support, so every bias is
    // zero and the largest bandwidth passes
    const PseudoOracleResult inside =
        pseudo_oracle(model, order4_kernel(), grid, 1.0, 0.4, 0.5, 10000, 0.0);
    CHECK(inside.h == 1.0);
    CHECK_FALSE(inside.fallback);

    // at the support edge the bias is ~f(1)/2 at every bandwidth: nothing
    // passes and the floor is reported with the fallback flag
    const PseudoOracleResult edge =
        pseudo_oracle(model, order4_kernel(), grid, 1.0, 0.4, 0.5, 10000, 1.0);
    CHECK(edge.h == grid.values.back());
    CHECK(edge.fallback);
}

TEST_CASE("pseudo oracle tightens with distance to the irregularity") {
    const DensityModel& model = make_model("sym_exponential");
    const BandwidthGrid grid = BandwidthGrid::build(10000, 2.0);
    const PseudoOracleResult near =
        pseudo_oracle(model, order4_kernel(), grid, 1.0, 0.4, 0.5, 10000, 0.05);
    const PseudoOracleResult far =
        pseudo_oracle(model, order4_kernel(), grid, 1.0, 0.4, 0.5, 10000, 3.0);
    CHECK(far.h >= near.h);
    CHECK_FALSE(far.fallback);
}
