#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "qwell/grid.hpp"
#include "qwell/occupation.hpp"
#include "qwell/poisson.hpp"
#include "qwell/spectrum.hpp"

namespace qwell {

namespace detail {

/// Spectrum of H[U] with enough levels for the eps-truncation certificate,
/// growing the level count on NeedsMoreLevels. The k <= (n-1)/4 eigensolver
/// bound caps the growth.
inline Spectrum spectrum_for_occupation(const Potential& U, const Grid& grid, double eps,
                                        Statistics statistics, int k_hint = 4) {
    const int k_max = std::max(1, (grid.n - 1) / 4);
    int k = std::min(std::max(k_hint, 2), k_max);
    for (;;) {
        Spectrum sp = lowest_eigenpairs(U, k, grid);
        try {
            (void)occupation_weights(sp, eps, statistics);
            return sp;
        } catch (const NeedsMoreLevels& e) {
            if (k >= k_max) throw;
            k = std::min(std::max(e.required, k + 2), k_max);
        }
    }
}

} // namespace detail

/// Free-statistics part of the energy at a known spectrum. Boltzmann:
/// -E_1 + eps^2 log sum_p e^{-(E_p-E_1)/eps^2} (log-sum-exp anchored at E_1).
/// Fermi-Dirac: -eps^3 sum_p [f_FD(u_p) eps_F - eps^2 ∫_{u_p}^∞ f_FD],
/// u_p = (E_p - eps_F)/eps^2.
inline double statistics_term_from_spectrum(const Spectrum& spectrum, const OccupationSet& occ,
                                            double eps) {
    const double eps2 = eps * eps;
    if (occ.statistics == Statistics::Boltzmann) {
        const double E1 = spectrum.energies.front();
        double S = 0.0;
        for (int p = 1; p <= occ.levels_used; ++p)
            S += std::exp(-(spectrum.energy(p) - E1) / eps2);
        return -E1 + eps2 * std::log(S);
    }
    const double ef = occ.fermi_level;
    double acc = 0.0;
    for (int p = 1; p <= occ.levels_used; ++p) {
        const double u = (spectrum.energy(p) - ef) / eps2;
        acc += fermi_dirac_f(u) * ef - eps2 * fermi_dirac_tail_integral(u);
    }
    return -(eps * eps2) * acc;
}

/// J_eps(U) evaluated with a caller-supplied spectrum of H[U]. Reusing one
/// spectrum across J and J~ keeps their difference an algebraic identity.
inline double functional_full_from_spectrum(const Potential& U, const Spectrum& spectrum,
                                            const OccupationSet& occ, double eps) {
    return dirichlet_energy(U.f) + statistics_term_from_spectrum(spectrum, occ, eps);
}

/// J~_eps(U) = (1/2)∫|U'|^2 - E_1[U] with a caller-supplied spectrum.
inline double functional_first_from_spectrum(const Potential& U, const Spectrum& spectrum) {
    return dirichlet_energy(U.f) - spectrum.energies.front();
}

/// Full-statistics energy functional on H^{1,0}(0, L): (1/2)∫|U'|^2 plus the
/// statistics term over all levels (truncated at machine precision).
inline double evaluate_functional_full(const Potential& U, double eps, const Grid& grid,
                                       Statistics statistics) {
    if (std::abs(U.f[0] - 0.0) > 0.0)
        throw InvalidArgument("evaluate_functional_full: U(0) must vanish");
    const Spectrum sp = detail::spectrum_for_occupation(U, grid, eps, statistics);
    const OccupationSet occ = occupation_weights(sp, eps, statistics);
    return functional_full_from_spectrum(U, sp, occ, eps);
}

/// Single-level energy functional J~_eps(U) = (1/2)∫|U'|^2 - E_1[U].
inline double evaluate_functional_first(const Potential& U, const Grid& grid) {
    const Spectrum sp = lowest_eigenpairs(U, 1, grid);
    return functional_first_from_spectrum(U, sp);
}

} // namespace qwell
