#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <utility>
#include <vector>

#include "qwell/rate_fit.hpp"
#include "support/oracles.hpp"

using namespace qwell;
using Catch::Approx;

TEST_CASE("fit recovers a planted single-exponent model exactly") {
    std::vector<std::pair<double, double>> samples;
    for (double eps : {0.5, 0.4, 0.3, 0.25, 0.2})
        samples.emplace_back(eps, std::exp(-5.0 / eps));
    const RateFit fit = fit_exponential_rate(samples, 1);
    CHECK(fit.rate_c == Approx(5.0).margin(1e-9));
    CHECK(fit.log_prefactor == Approx(0.0).margin(1e-9));
    CHECK(fit.r_squared == Approx(1.0).margin(1e-12));
    CHECK(fit.model_exponent == 1);
}

TEST_CASE("fit recovers a planted squared-exponent model with prefactor") {
    std::vector<std::pair<double, double>> samples;
    for (double eps : {0.6, 0.5, 0.4, 0.35})
        samples.emplace_back(eps, 3.0 * std::exp(-2.0 / (eps * eps)));
    const RateFit fit = fit_exponential_rate(samples, 2);
    CHECK(fit.rate_c == Approx(2.0).margin(1e-9));
    CHECK(fit.log_prefactor == Approx(std::log(3.0)).margin(1e-9));
    CHECK(fit.r_squared == Approx(1.0).margin(1e-12));
}

TEST_CASE("fit tolerates small multiplicative noise") {
    std::mt19937 rng = oracles::seeded_rng(2024);
    std::uniform_real_distribution<double> noise(-0.01, 0.01);
    std::vector<std::pair<double, double>> samples;
    for (double eps : {0.5, 0.45, 0.4, 0.35, 0.3, 0.25, 0.2})
        samples.emplace_back(eps, std::exp(-5.0 / eps) * (1.0 + noise(rng)));
    const RateFit fit = fit_exponential_rate(samples, 1);
    CHECK(fit.rate_c == Approx(5.0).margin(0.2));
    CHECK(fit.r_squared > 0.99);
}

TEST_CASE("fit input validation") {
    std::vector<std::pair<double, double>> two = {{0.5, 0.1}, {0.4, 0.05}};
    CHECK_THROWS_AS(fit_exponential_rate(two, 1), InvalidArgument);

    std::vector<std::pair<double, double>> bad_err = {{0.5, 0.1}, {0.4, -0.05}, {0.3, 0.01}};
    CHECK_THROWS_AS(fit_exponential_rate(bad_err, 1), InvalidArgument);

    std::vector<std::pair<double, double>> dup = {{0.5, 0.1}, {0.5, 0.05}, {0.3, 0.01}};
    CHECK_THROWS_AS(fit_exponential_rate(dup, 1), InvalidArgument);

    std::vector<std::pair<double, double>> ok = {{0.5, 0.1}, {0.4, 0.05}, {0.3, 0.01}};
    CHECK_THROWS_AS(fit_exponential_rate(ok, 3), InvalidArgument);
}
