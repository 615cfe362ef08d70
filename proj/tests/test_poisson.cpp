#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "qwell/poisson.hpp"
#include "support/oracles.hpp"

using namespace qwell;
using Catch::Approx;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("solve_poisson: zero source, closed forms") {
    const Grid g = make_grid(1.0, 1000);
    const Potential zero = solve_poisson(GridFunction(g, 0.0), g);
    for (int i = 0; i <= g.n; ++i) CHECK(zero.f[i] == Approx(0.0).margin(1e-14));

    // -U'' = 1, U(0)=0, U'(1)=0  =>  U = x - x^2/2
    const Potential u1 = solve_poisson(GridFunction(g, 1.0), g);
    CHECK(u1.f[0] == 0.0);
    for (int i = 0; i <= g.n; ++i) {
        const double x = g.node(i);
        CHECK(u1.f[i] == Approx(x - 0.5 * x * x).margin(1e-6));
    }
    CHECK(u1.f[g.n] == Approx(0.5).margin(1e-6));
    CHECK(u1.nonneg);
    CHECK(u1.right_bc == RightBc::NeumannZero);

    // rho = 2 sin^2(pi x): antiderivative oracle gives U(1) = 1/2
    const GridFunction rho = sample(g, [](double x) {
        return 2.0 * std::sin(kPi * x) * std::sin(kPi * x);
    });
    const Potential u2 = solve_poisson(rho, g);
    CHECK(u2.f[g.n] == Approx(0.5).margin(1e-5));
}

TEST_CASE("solve_poisson rejects negative densities") {
    const Grid g = make_grid(1.0, 64);
    GridFunction rho(g, 0.0);
    rho[10] = -1e-6;
    CHECK_THROWS_AS(solve_poisson(rho, g), InvalidArgument);
}

TEST_CASE("solve_poisson: structure of the solution for nonnegative sources") {
    // densities here vanish at the right end, as every wavefunction-built
    // density does; then the one-sided U'(L) is exactly h^2 rho_n / 2 = 0
    const Grid g = make_grid(2.0, 500);
    std::mt19937 rng = oracles::seeded_rng(314);
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    for (int trial = 0; trial < 5; ++trial) {
        GridFunction rho(g);
        double rho_max = 0.0;
        for (int i = 0; i <= g.n; ++i) {
            rho[i] = dist(rng);
            rho_max = std::max(rho_max, rho[i]);
        }
        rho[g.n] = 0.0;
        const Potential U = solve_poisson(rho, g);
        CHECK(U.f[0] == 0.0);
        // one-sided discrete derivative at the right end
        CHECK(std::abs(U.f[g.n] - U.f[g.n - 1]) / g.h <= 1e-8 * rho_max);
        const double h2 = g.h * g.h;
        for (int i = 1; i < g.n; ++i) CHECK(U.f[i] >= -1e-12);
        // nondecreasing and concave nodewise
        for (int i = 0; i < g.n; ++i) CHECK(U.f[i + 1] >= U.f[i] - 1e-12);
        for (int i = 1; i < g.n; ++i)
            CHECK(U.f[i + 1] - 2.0 * U.f[i] + U.f[i - 1] <= 1e-12 * (1.0 + rho_max * h2));
    }
}

TEST_CASE("solve_poisson is linear in the source") {
    const Grid g = make_grid(1.5, 256);
    std::mt19937 rng = oracles::seeded_rng(2718);
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    GridFunction r1(g), r2(g), mix(g);
    const double a = 0.7, b = 1.9;
    for (int i = 0; i <= g.n; ++i) {
        r1[i] = dist(rng);
        r2[i] = dist(rng);
        mix[i] = a * r1[i] + b * r2[i];
    }
    const Potential u1 = solve_poisson(r1, g);
    const Potential u2 = solve_poisson(r2, g);
    const Potential um = solve_poisson(mix, g);
    for (int i = 0; i <= g.n; ++i)
        CHECK(um.f[i] == Approx(a * u1.f[i] + b * u2.f[i]).margin(1e-10));
}

TEST_CASE("greens_kernel_apply: closed form and cross-solver agreement") {
    const Grid g = make_grid(1.0, 200);
    const Potential zero = greens_kernel_apply(GridFunction(g, 0.0), g);
    for (int i = 0; i <= g.n; ++i) CHECK(zero.f[i] == 0.0);

    const Potential u1 = greens_kernel_apply(GridFunction(g, 1.0), g);
    for (int i = 0; i <= g.n; ++i) {
        const double x = g.node(i);
        CHECK(u1.f[i] == Approx(x - 0.5 * x * x).margin(1e-5));
    }

    std::mt19937 rng = oracles::seeded_rng(77);
    std::uniform_real_distribution<double> dist(0.0, 2.0);
    const Grid g2 = make_grid(3.0, 512);
    GridFunction rho(g2);
    double rho_max = 0.0;
    for (int i = 0; i <= g2.n; ++i) {
        rho[i] = dist(rng);
        rho_max = std::max(rho_max, rho[i]);
    }
    const Potential a = greens_kernel_apply(rho, g2);
    const Potential b = solve_poisson(rho, g2);
    double dev = 0.0;
    for (int i = 0; i <= g2.n; ++i) dev = std::max(dev, std::abs(a.f[i] - b.f[i]));
    CHECK(dev <= 1e-4 * rho_max);
}

TEST_CASE("kernel and tridiagonal paths stay together under refinement") {
    // min(x,y) with trapezoid weights is the exact discrete Green's function
    // of the tridiagonal scheme (the kink's second difference reproduces the
    // point source, the half-weight end row reproduces the ghost closure), so
    // the two paths agree to roundoff at any n, well inside the contract's
    // discretization-order bound.
    auto max_gap = [&](int n) {
        const Grid g = make_grid(1.0, n);
        const GridFunction rho = sample(g, [](double x) { return 1.0 + std::sin(2.0 * x); });
        const Potential a = greens_kernel_apply(rho, g);
        const Potential b = solve_poisson(rho, g);
        double dev = 0.0;
        for (int i = 0; i <= g.n; ++i) dev = std::max(dev, std::abs(a.f[i] - b.f[i]));
        return dev;
    };
    CHECK(max_gap(64) <= 1e-12);
    CHECK(max_gap(128) <= 1e-12);
    CHECK(max_gap(256) <= 1e-12);
}
