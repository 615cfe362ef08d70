#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "qwell/grid.hpp"
#include "support/oracles.hpp"

using namespace qwell;
using Catch::Approx;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("make_grid basics") {
    const Grid g = make_grid(1.0, 100);
    CHECK(g.h == Approx(0.01));
    CHECK(g.num_nodes() == 101);

    const Grid g2 = make_grid(10.0, 32);
    CHECK(g2.h == Approx(0.3125));

    // scaled domain [0, 1/eps] at eps = 0.1
    const Grid g3 = make_grid(1.0 / 0.1, 1000);
    CHECK(g3.length == Approx(10.0));
    CHECK(g3.h == Approx(0.01));

    CHECK_THROWS_AS(make_grid(0.0, 100), InvalidArgument);
    CHECK_THROWS_AS(make_grid(-1.0, 100), InvalidArgument);
    CHECK_THROWS_AS(make_grid(1.0, 31), InvalidArgument);
}

TEST_CASE("integrate: constants, affine, closed-form oscillatory") {
    const Grid g = make_grid(1.0, 1000);
    CHECK(integrate(sample(g, [](double) { return 1.0; })) == Approx(1.0).margin(1e-14));
    CHECK(integrate(sample(g, [](double x) { return x; })) == Approx(0.5).margin(1e-14));

    // oracle: antiderivative of 2 sin^2(pi x) is x - sin(2 pi x)/(2 pi)
    auto f = [](double x) { return 2.0 * std::sin(kPi * x) * std::sin(kPi * x); };
    const double expected = (1.0 - std::sin(2.0 * kPi) / (2.0 * kPi)) - 0.0;
    CHECK(integrate(sample(g, f)) == Approx(expected).margin(1e-6));
}

TEST_CASE("integrate is linear") {
    const Grid g = make_grid(3.0, 257);
    std::mt19937 rng = oracles::seeded_rng(42);
    std::uniform_real_distribution<double> dist(-2.0, 2.0);
    for (int trial = 0; trial < 20; ++trial) {
        GridFunction f(g), gf(g), combo(g);
        const double a = dist(rng), b = dist(rng);
        for (int i = 0; i <= g.n; ++i) {
            f[i] = dist(rng);
            gf[i] = dist(rng);
            combo[i] = a * f[i] + b * gf[i];
        }
        const double lhs = integrate(combo);
        const double rhs = a * integrate(f) + b * integrate(gf);
        CHECK(lhs == Approx(rhs).margin(1e-12 * (1.0 + std::abs(rhs))));
    }
}

TEST_CASE("norms: zero, affine, sine closed forms") {
    const Grid g = make_grid(1.0, 1000);
    const GridFunction zero(g, 0.0);
    CHECK(norm(zero, NormKind::L2) == 0.0);
    CHECK(norm(zero, NormKind::H1Semi) == 0.0);
    CHECK(norm(zero, NormKind::H1) == 0.0);

    const GridFunction lin = sample(g, [](double x) { return x; });
    CHECK(norm(lin, NormKind::L2) == Approx(1.0 / std::sqrt(3.0)).margin(1e-6));
    CHECK(norm(lin, NormKind::H1Semi) == Approx(1.0).margin(1e-6));

    const Grid g2 = make_grid(1.0, 2000);
    const GridFunction s = sample(g2, [](double x) { return std::sin(kPi * x); });
    CHECK(norm(s, NormKind::L2) == Approx(std::sqrt(0.5)).margin(1e-6));
}

TEST_CASE("H1 norm splits into L2 and seminorm parts exactly") {
    const Grid g = make_grid(2.0, 123);
    std::mt19937 rng = oracles::seeded_rng(7);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (int trial = 0; trial < 10; ++trial) {
        GridFunction f(g);
        for (int i = 0; i <= g.n; ++i) f[i] = dist(rng);
        const double l2 = norm(f, NormKind::L2);
        const double semi = norm(f, NormKind::H1Semi);
        const double h1 = norm(f, NormKind::H1);
        CHECK(h1 * h1 == Approx(l2 * l2 + semi * semi).epsilon(1e-15));
    }
}

TEST_CASE("dirichlet_energy matches the seminorm") {
    const Grid g = make_grid(1.0, 64);
    const GridFunction lin = sample(g, [](double x) { return 3.0 * x; });
    CHECK(dirichlet_energy(lin) == Approx(4.5).margin(1e-12));
}
