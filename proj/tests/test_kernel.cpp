#include "doctest.h"

#include <cmath>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "ikde/kernel.hpp"

using namespace ikde;

TEST_CASE("order4 kernel frozen norms") {
    const Kernel& k = order4_kernel();
    CHECK(k.order() == 4);
    CHECK(k.support_radius() == 1.0);
    // ||K||_1 = 3 sqrt(0.6) - 1, ||K||_2^2 = 9/8, sup = K(0)
    CHECK(k.norms().l1 == doctest::Approx(1.3237900077244501).epsilon(1e-10));
    CHECK(k.norms().l2sq == doctest::Approx(1.125).epsilon(1e-12));
    CHECK(k.norms().sup == doctest::Approx(1.125).epsilon(1e-14));
    // moments: mass 1, m2 = 0, m4 = -3/35
    CHECK(kernel_moment(k, 0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(kernel_moment(k, 2) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(kernel_moment(k, 4) == doctest::Approx(-0.085714285714285714).epsilon(1e-10));
    CHECK(verify_order(k));
}

TEST_CASE("second order kernels") {
    const Kernel& rect = rectangular_kernel();
    CHECK(rect.order() == 2);
    CHECK(rect.norms().l1 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rect.norms().l2sq == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(rect.norms().sup == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(verify_order(rect));

    const Kernel& epan = epanechnikov_kernel();
    CHECK(epan.order() == 2);
    CHECK(epan.norms().l1 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(epan.norms().l2sq == doctest::Approx(0.6).epsilon(1e-10));
    CHECK(epan.norms().sup == doctest::Approx(0.75).epsilon(1e-14));
    CHECK(verify_order(epan));
}

TEST_CASE("gaussian comparator kernel") {
    const Kernel& g = gaussian_kernel();
    CHECK(g.order() == 2);
    CHECK(g.support_radius() == 9.0);
    CHECK_FALSE(g.compact_unit_support());
    CHECK(g.norms().l1 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(g.norms().l2sq == doctest::Approx(0.28209479177387814).epsilon(1e-10));
    CHECK(verify_order(g));
    // truncation clamp: exactly zero outside |u| <= 9
    CHECK(g(9.0001) == 0.0);
    CHECK(g(-12.0) == 0.0);
}

namespace {
double order4_shape(double u) { return 1.125 - 1.875 * u * u; }
} // namespace

TEST_CASE("verify_order catches vanishing declared moment") {
    const Kernel mislabeled("mislabeled", 2, &order4_shape);
    CHECK_FALSE(verify_order(mislabeled)); // m2 == 0, so order 2 is wrong
    const Kernel correct("correct", 4, &order4_shape);
    CHECK(verify_order(correct));
    CHECK_THROWS_AS(verify_order(correct, 0.0), std::invalid_argument);
}

TEST_CASE("eval_scaled value and domain") {
    const Kernel& k = order4_kernel();
    CHECK(eval_scaled(k, 0.5, 0.25) == doctest::Approx(1.3125).epsilon(1e-15));
    CHECK(eval_scaled(k, 1.0, 0.0) == doctest::Approx(1.125).epsilon(1e-15));
    CHECK(eval_scaled(k, 0.5, 0.75) == 0.0); // |u/h| > 1
    CHECK_THROWS_AS(eval_scaled(k, 0.0, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(eval_scaled(k, 1.5, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(eval_scaled(k, -0.25, 0.1), std::invalid_argument);
}

TEST_CASE("variance bound frozen value and domain") {
    const Kernel& k = order4_kernel();
    CHECK(variance_bound(2.0, k, 100, 0.5) == doctest::Approx(0.21213203435596426).epsilon(1e-12));
    CHECK_THROWS_AS(variance_bound(0.0, k, 100, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(variance_bound(1.0, k, 0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(variance_bound(1.0, k, 100, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(variance_bound(1.0, k, 100, 2.0), std::invalid_argument);
}

TEST_CASE("rectangular difference integral has closed form (r-1)/2") {
    const Kernel& rect = rectangular_kernel();
    CHECK(diff_ratio_integral(rect, 1.0) == 0.0);
    for (double r : {1.5, 2.0, 4.0, 32.0}) {
        CHECK(diff_ratio_integral(rect, r) == doctest::Approx((r - 1.0) / 2.0).epsilon(1e-10));
    }
    CHECK_THROWS_AS(diff_ratio_integral(rect, 0.5), std::invalid_argument);
}

TEST_CASE("difference integral grows with the ratio") {
    const Kernel& k = order4_kernel();
    double prev = diff_ratio_integral(k, 1.0);
    CHECK(prev == 0.0);
    for (double r : {1.5, 2.0, 4.0, 8.0, 64.0}) {
        const double cur = diff_ratio_integral(k, r);
        CHECK(cur > prev);
        prev = cur;
    }
}

TEST_CASE("diff variance bound matches its definition bit for bit") {
    const Kernel& k = order4_kernel();
    const double sup = 1.7;
    const std::int64_t n = 321;
    const double h = 0.5, eta = 0.125;
    const double direct =
        std::sqrt(sup * diff_ratio_integral(k, h / eta) / (static_cast<double>(n) * h));
    CHECK(diff_variance_bound(sup, k, n, h, eta) == direct);
    CHECK_THROWS_AS(diff_variance_bound(sup, k, n, 0.125, 0.5), std::invalid_argument);
}

TEST_CASE("ratio integral cache equals the direct computation") {
    RatioIntegralCache cache(order4_kernel(), 2.0);
    CHECK(cache.a() == 2.0);
    CHECK(cache.kernel().name() == "order4");
    for (int k = 0; k <= 6; ++k) {
        CHECK(cache.at_exponent(k) == diff_ratio_integral(order4_kernel(), std::pow(2.0, k)));
    }
    CHECK_THROWS_AS(cache.at_exponent(-1), std::invalid_argument);
}

TEST_CASE("ratio integral cache is safe under concurrent reads") {
    RatioIntegralCache cache(order4_kernel(), 2.0);
    std::vector<double> expected;
    for (int k = 0; k <= 7; ++k) {
        expected.push_back(diff_ratio_integral(order4_kernel(), std::pow(2.0, k)));
    }
    std::vector<std::vector<double>> got(4, std::vector<double>(8, 0.0));
    std::vector<std::thread> pool;
    for (int t = 0; t < 4; ++t) {
        pool.emplace_back([&cache, &got, t] {
            for (int k = 0; k <= 7; ++k) got[static_cast<std::size_t>(t)][static_cast<std::size_t>(k)] = cache.at_exponent(k);
        });
    }
    for (auto& th : pool) th.join();
    for (const auto& row : got) {
        for (int k = 0; k <= 7; ++k) CHECK(row[static_cast<std::size_t>(k)] == expected[static_cast<std::size_t>(k)]);
    }
}

TEST_CASE("kernel lookup by name") {
    CHECK(&kernel_by_name("order4") == &order4_kernel());
    CHECK(&kernel_by_name("rectangular") == &rectangular_kernel());
    CHECK(&kernel_by_name("epanechnikov") == &epanechnikov_kernel());
    CHECK(&kernel_by_name("gaussian") == &gaussian_kernel());
    CHECK(kernel_names().size() == 4);
    try {
        kernel_by_name("triangle");
        FAIL("expected std::invalid_argument");
    } catch (const std::invalid_argument& e) {
        const std::string msg = e.what();
        CHECK(msg.find("order4") != std::string::npos);
        CHECK(msg.find("rectangular") != std::string::npos);
    }
}

TEST_CASE("compute_norms serves requested Lp norms") {
    const double ps[] = {1.0, 2.0};
    const KernelNorms norms = compute_norms(rectangular_kernel(), ps);
    CHECK(norms.lp.at(1.0) == doctest::Approx(1.0).epsilon(1e-12));
    // L2 norm itself (not squared): sqrt(1/2)
    CHECK(norms.lp.at(2.0) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
}
