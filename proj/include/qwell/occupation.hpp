#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "qwell/grid.hpp"
#include "qwell/spectrum.hpp"

namespace qwell {

enum class Statistics { Boltzmann, FermiDirac };

/// Per-level occupation weights. Boltzmann: w_p = e^{-E_p/eps^2} / Z, sum 1.
/// Fermi-Dirac: w_p = eps^3 * log(1 + e^{-(E_p - eps_F)/eps^2}) with eps_F
/// fixed by the total-charge constraint.
struct OccupationSet {
    Statistics statistics = Statistics::Boltzmann;
    std::vector<double> weights;
    double partition = 0.0;    // Boltzmann only
    double fermi_level = 0.0;  // Fermi-Dirac only
    int levels_used = 0;
};

/// log(1 + e^{-u}) without overflow on either side.
inline double fermi_dirac_f(double u) {
    if (u >= 0.0) return std::log1p(std::exp(-u));
    return -u + std::log1p(std::exp(u));
}

// truncation cutoff: a level enters while its relative weight stays above this
inline constexpr double kLevelCutoff = 1e-16;

namespace detail {

/// Smallest p with pi^2 p^2 eps^2 >= E_target on the scaled domain [0, 1/eps];
/// box levels bound E_p from below for nonnegative potentials, so this is a
/// safe level-count estimate.
inline int box_level_estimate(double energy_target, double eps) {
    const double pi = 3.14159265358979323846;
    const double p = std::sqrt(std::max(energy_target, 0.0)) / (pi * eps);
    return std::max(2, static_cast<int>(std::ceil(p)) + 1);
}

} // namespace detail

/// Fermi level from sum_p f_FD((E_p - eps_F)/eps^2) = 1/eps^3, by bisection on
/// a geometrically grown bracket; the sum is continuous and strictly
/// increasing in eps_F.
inline double solve_fermi_level(const Spectrum& spectrum, double eps) {
    if (spectrum.count() < 1) throw InvalidArgument("solve_fermi_level: empty spectrum");
    const double eps2 = eps * eps;
    const double target = 1.0 / (eps * eps2);
    auto total = [&](double ef) {
        double s = 0.0;
        for (double E : spectrum.energies) s += fermi_dirac_f((E - ef) / eps2);
        return s;
    };
    double lo = spectrum.energies.front(), hi = lo;
    double width = std::max(1.0, eps2);
    int doublings = 0;
    while (total(lo) > target) {
        lo -= width; width *= 2.0;
        if (++doublings > 200)
            throw InfeasibleConstraint("solve_fermi_level: bracket growth failed (low side)");
    }
    width = std::max(1.0, eps2);
    while (total(hi) < target) {
        hi += width; width *= 2.0;
        if (++doublings > 200)
            throw InfeasibleConstraint("solve_fermi_level: bracket growth failed (high side)");
    }
    for (int it = 0; it < 400; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;  // interval exhausted
        const double s = total(mid);
        if (std::abs(s - target) <= 1e-10 * target) return mid;
        (s < target ? lo : hi) = mid;
    }
    const double mid = 0.5 * (lo + hi);
    if (std::abs(total(mid) - target) > 1e-10 * target)
        throw InfeasibleConstraint("solve_fermi_level: bisection stalled before 1e-10 residual");
    return mid;
}

/// Builds the occupation weights, truncating the level sum at machine
/// precision (relative cutoff 1e-16, hard cap n/10 levels). Throws
/// NeedsMoreLevels with a level-count estimate when the available spectrum
/// cannot certify the truncation.
inline OccupationSet occupation_weights(const Spectrum& spectrum, double eps,
                                        Statistics statistics) {
    if (spectrum.count() < 1) throw InvalidArgument("occupation_weights: empty spectrum");
    const double eps2 = eps * eps;
    const int cap = std::max(1, spectrum.grid.n / 10);
    const double E1 = spectrum.energies.front();

    OccupationSet occ;
    occ.statistics = statistics;

    if (statistics == Statistics::Boltzmann) {
        // include levels while e^{-(E_p-E_1)/eps^2} >= cutoff
        int P = 0;
        for (int p = 1; p <= spectrum.count(); ++p) {
            const double rel = std::exp(-(spectrum.energy(p) - E1) / eps2);
            if (rel < kLevelCutoff) break;
            P = p;
            if (P >= cap) break;
        }
        if (P == spectrum.count() && P < cap) {
            // last available level still carries weight: cannot certify the tail
            const double need = E1 + eps2 * std::log(1.0 / kLevelCutoff);
            throw NeedsMoreLevels("occupation_weights: spectrum too short to certify truncation",
                                  std::max(spectrum.count() + 2, detail::box_level_estimate(need, eps)));
        }
        occ.levels_used = P;
        occ.weights.resize(static_cast<std::size_t>(P));
        double S = 0.0;
        for (int p = 1; p <= P; ++p) {
            const double rel = std::exp(-(spectrum.energy(p) - E1) / eps2);
            occ.weights[static_cast<std::size_t>(p - 1)] = rel;
            S += rel;
        }
        for (double& w : occ.weights) w /= S;
        occ.partition = std::exp(-E1 / eps2) * S;
        return occ;
    }

    // Fermi-Dirac: the chemical potential first, then the weights
    const double ef = solve_fermi_level(spectrum, eps);
    const double total = 1.0 / (eps * eps2);
    int P = 0;
    for (int p = 1; p <= spectrum.count(); ++p) {
        const double f = fermi_dirac_f((spectrum.energy(p) - ef) / eps2);
        if (f < kLevelCutoff * total) break;
        P = p;
        if (P >= cap) break;
    }
    if (P == spectrum.count() && P < cap) {
        const double need = ef + eps2 * (std::log(1.0 / kLevelCutoff) + 3.0 * std::log(1.0 / eps));
        throw NeedsMoreLevels("occupation_weights: spectrum too short to certify truncation",
                              std::max(spectrum.count() + 2, detail::box_level_estimate(need, eps)));
    }
    occ.levels_used = P;
    occ.fermi_level = ef;
    occ.weights.resize(static_cast<std::size_t>(P));
    for (int p = 1; p <= P; ++p)
        occ.weights[static_cast<std::size_t>(p - 1)] =
            eps * eps2 * fermi_dirac_f((spectrum.energy(p) - ef) / eps2);
    return occ;
}

/// rho = sum_p w_p |psi_p|^2; integrates to 1 for both statistics.
inline GridFunction charge_density(const Spectrum& spectrum, const OccupationSet& occ) {
    if (occ.levels_used > spectrum.count())
        throw InvalidArgument("charge_density: occupation uses more levels than the spectrum has");
    GridFunction rho(spectrum.grid, 0.0);
    for (int p = 1; p <= occ.levels_used; ++p) {
        const double w = occ.weights[static_cast<std::size_t>(p - 1)];
        const GridFunction& psi = spectrum.state(p);
        for (int i = 0; i <= spectrum.grid.n; ++i) rho[i] += w * psi[i] * psi[i];
    }
    return rho;
}

namespace detail {

template <class F>
double adaptive_simpson(F&& f, double a, double b, double fa, double fm, double fb,
                        double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

} // namespace detail

/// ∫_x^∞ log(1 + e^{-u}) du by adaptive Simpson on [x, X] with the analytic
/// remainder bound ∫_X^∞ <= e^{-X} closing the tail.
inline double fermi_dirac_tail_integral(double x) {
    const double X = std::max(x, 0.0) + 40.0;
    auto f = [](double u) { return fermi_dirac_f(u); };
    const double fa = f(x), fb = f(X), fm = f(0.5 * (x + X));
    const double whole = (X - x) / 6.0 * (fa + 4.0 * fm + fb);
    const double tol = 1e-13 * std::max(1.0, std::abs(whole));
    const double body = detail::adaptive_simpson(f, x, X, fa, fm, fb, whole, tol, 48);
    return body + std::exp(-X);
}

} // namespace qwell
