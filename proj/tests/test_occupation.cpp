#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "qwell/occupation.hpp"
#include "support/oracles.hpp"

using namespace qwell;
using Catch::Approx;

namespace {
constexpr double kPi = 3.14159265358979323846;

Spectrum synthetic_spectrum(const Grid& g, std::vector<double> energies) {
    // states are irrelevant for weight/level arithmetic; use box modes
    Spectrum sp;
    sp.grid = g;
    sp.energies = std::move(energies);
    for (std::size_t p = 0; p < sp.energies.size(); ++p) {
        GridFunction psi(g, 0.0);
        for (int i = 0; i <= g.n; ++i)
            psi[i] = std::sqrt(2.0 / g.length) *
                     std::sin((static_cast<double>(p) + 1.0) * kPi * g.node(i) / g.length);
        sp.states.push_back(std::move(psi));
    }
    return sp;
}
} // namespace

TEST_CASE("Boltzmann weights: two-level arithmetic and normalization") {
    const Grid g = make_grid(1.0, 320);
    // extra high level so the truncation certificate is satisfiable
    const Spectrum sp = synthetic_spectrum(g, {1.0, 2.0, 60.0});
    const OccupationSet occ = occupation_weights(sp, 1.0, Statistics::Boltzmann);
    REQUIRE(occ.levels_used == 2);
    const double w1 = std::exp(-1.0) / (std::exp(-1.0) + std::exp(-2.0));
    CHECK(occ.weights[0] == Approx(w1).margin(1e-12));
    CHECK(occ.weights[1] == Approx(1.0 - w1).margin(1e-12));
    CHECK(occ.weights[0] + occ.weights[1] == Approx(1.0).margin(1e-12));
    CHECK(occ.partition == Approx(std::exp(-1.0) + std::exp(-2.0)).epsilon(1e-12));
}

TEST_CASE("Boltzmann truncation: dominated second level drops out") {
    const Grid g = make_grid(1.0, 320);
    // E2 - E1 = 40 eps^2 with eps = 1 -> w2/w1 = e^{-40} < 1e-17
    const Spectrum sp = synthetic_spectrum(g, {1.0, 41.0, 90.0});
    const OccupationSet occ = occupation_weights(sp, 1.0, Statistics::Boltzmann);
    CHECK(occ.levels_used == 1);
    CHECK(occ.weights[0] == Approx(1.0).margin(1e-12));
}

TEST_CASE("Boltzmann truncation failure carries a level estimate") {
    const Grid g = make_grid(1.0, 320);
    const Spectrum sp = synthetic_spectrum(g, {1.0, 1.5, 2.0});
    try {
        occupation_weights(sp, 1.0, Statistics::Boltzmann);
        FAIL("expected NeedsMoreLevels");
    } catch (const NeedsMoreLevels& e) {
        CHECK(e.required > 3);
    }
}

TEST_CASE("charge density: single level and nonnegativity") {
    const Grid g = make_grid(1.0, 320);
    const Spectrum sp = synthetic_spectrum(g, {1.0, 60.0});
    const OccupationSet occ = occupation_weights(sp, 1.0, Statistics::Boltzmann);
    REQUIRE(occ.levels_used == 1);
    const GridFunction rho = charge_density(sp, occ);
    GridFunction psi2(g);
    for (int i = 0; i <= g.n; ++i) psi2[i] = sp.state(1)[i] * sp.state(1)[i];
    for (int i = 0; i <= g.n; ++i) {
        CHECK(rho[i] == Approx(psi2[i]).margin(1e-14));
        CHECK(rho[i] >= 0.0);
    }
    CHECK(integrate(rho) == Approx(1.0).margin(1e-8));
}

TEST_CASE("charge density: equal weights over the two free-well levels") {
    const Grid g = make_grid(2.0, 400);  // L = 2, midpoint is a node
    Spectrum sp = synthetic_spectrum(g, {1.0, 2.0});
    OccupationSet occ;
    occ.statistics = Statistics::Boltzmann;
    occ.weights = {0.5, 0.5};
    occ.levels_used = 2;
    const GridFunction rho = charge_density(sp, occ);
    // psi_2 vanishes at L/2; psi_1^2(L/2) = 2/L
    CHECK(rho[g.n / 2] == Approx(0.5 * 2.0 / g.length).margin(1e-10));
}

TEST_CASE("Fermi level: single-level closed form and monotonicity") {
    const Grid g = make_grid(1.0, 320);
    const double E1 = 0.7;
    const Spectrum sp = synthetic_spectrum(g, {E1});
    const double eps = 0.5;
    const double S = 1.0 / (eps * eps * eps);  // 8
    const double ef = solve_fermi_level(sp, eps);
    // log(1+e^{-(E1-ef)/eps^2}) = S  =>  ef = E1 + eps^2 log(e^S - 1)
    const double closed = E1 + eps * eps * std::log(std::expm1(S));
    CHECK(ef == Approx(closed).margin(1e-10));

    // doubling the target charge raises the level (compare eps vs smaller eps)
    const double ef_harder = solve_fermi_level(sp, 0.4);
    CHECK(ef_harder > ef);
}

TEST_CASE("Fermi level: V=0 spectrum on [0,2] meets the constraint to 1e-10") {
    const double eps = 0.5;
    const Grid g = make_grid(2.0, 512);
    std::vector<double> energies;
    for (int p = 1; p <= 50; ++p) energies.push_back(kPi * kPi * p * p / 4.0);
    const Spectrum sp = synthetic_spectrum(g, std::move(energies));
    const double ef = solve_fermi_level(sp, eps);
    double total = 0.0;
    for (double E : sp.energies) total += fermi_dirac_f((E - ef) / (eps * eps));
    CHECK(std::abs(total - 8.0) <= 8e-10);
}

TEST_CASE("Fermi-Dirac weights: scaling, ordering, constraint") {
    const double eps = 0.5;
    const Grid g = make_grid(2.0, 512);
    std::vector<double> energies;
    for (int p = 1; p <= 50; ++p) energies.push_back(kPi * kPi * p * p / 4.0);
    const Spectrum sp = synthetic_spectrum(g, std::move(energies));
    const OccupationSet occ = occupation_weights(sp, eps, Statistics::FermiDirac);
    REQUIRE(occ.levels_used >= 2);
    double sum = 0.0;
    for (int p = 1; p <= occ.levels_used; ++p) {
        const double w = occ.weights[p - 1];
        CHECK(w >= 0.0);
        if (p > 1) CHECK(w <= occ.weights[p - 2] + 1e-15);
        const double direct =
            eps * eps * eps * fermi_dirac_f((sp.energy(p) - occ.fermi_level) / (eps * eps));
        CHECK(w == Approx(direct).margin(1e-15));
        sum += w;
    }
    CHECK(sum == Approx(1.0).margin(1e-10));
}

TEST_CASE("fermi_dirac_f is stable on both sides") {
    CHECK(fermi_dirac_f(0.0) == Approx(std::log(2.0)).margin(1e-15));
    CHECK(fermi_dirac_f(800.0) == 0.0);  // underflows to zero cleanly
    CHECK(fermi_dirac_f(-900.0) == Approx(900.0).margin(1e-10));
    CHECK(std::isfinite(fermi_dirac_f(-1e6)));
}

TEST_CASE("fermi_dirac_tail_integral matches the dilogarithm series") {
    for (double x : {-30.0, -5.0, -1.0, 0.0, 0.5, 2.0, 10.0, 30.0}) {
        const double quad = fermi_dirac_tail_integral(x);
        const double series = oracles::fermi_tail_series(x);
        CHECK(quad == Approx(series).epsilon(1e-11));
    }
    // pi^2/12 at x = 0
    CHECK(fermi_dirac_tail_integral(0.0) ==
          Approx(kPi * kPi / 12.0).epsilon(1e-11));
}
