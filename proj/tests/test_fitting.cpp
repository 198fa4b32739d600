#include <doctest.h>

#include "neckspec/errors.hpp"
#include "neckspec/fitting.hpp"

using namespace neckspec;

TEST_CASE("exact affine data is recovered with r^2 = 1") {
    std::vector<double> x = {1.0, 2.0, 3.0, 4.0};
    std::vector<double> y;
    for (double xi : x) y.push_back(1.25 * xi - 0.5);
    auto fit = affine_fit(x, y);
    CHECK(fit.slope == doctest::Approx(1.25).epsilon(1e-12));
    CHECK(fit.intercept == doctest::Approx(-0.5).epsilon(1e-12));
    CHECK(fit.r_squared == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_FALSE(fit.degenerate);
}

TEST_CASE("synthetic rate law 1/lambda = A log(1/s) + B") {
    // lambda = 0.8 / L  =>  1/lambda = 1.25 L, so A = 1.25, B = 0.
    std::vector<double> L = {4.6, 6.9, 9.2, 11.5};
    std::vector<double> inv;
    for (double l : L) inv.push_back(l / 0.8);
    auto fit = affine_fit(L, inv);
    CHECK(fit.slope == doctest::Approx(1.25).epsilon(1e-12));
    CHECK(fit.intercept == doctest::Approx(0.0).epsilon(1e-10));
    CHECK(fit.r_squared == doctest::Approx(1.0));
}

TEST_CASE("constant response is flagged degenerate") {
    auto fit = affine_fit({1.0, 2.0, 3.0}, {7.0, 7.0, 7.0});
    CHECK(fit.degenerate);
    CHECK(fit.r_squared == 0.0);
    CHECK(fit.slope == doctest::Approx(0.0));
}

TEST_CASE("noisy data keeps r^2 inside [0, 1]") {
    std::vector<double> x = {1.0, 2.0, 3.0, 4.0, 5.0};
    std::vector<double> y = {1.1, 1.9, 3.2, 3.8, 5.1};
    auto fit = affine_fit(x, y);
    CHECK(fit.r_squared > 0.9);
    CHECK(fit.r_squared <= 1.0);
}

TEST_CASE("input validation") {
    CHECK_THROWS_AS(affine_fit({1.0}, {1.0}), domain_error);
    CHECK_THROWS_AS(affine_fit({1.0, 2.0}, {1.0}), domain_error);
}
