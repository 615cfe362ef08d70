#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "qwell/functionals.hpp"
#include "qwell/grid.hpp"
#include "qwell/halfline.hpp"
#include "qwell/rate_fit.hpp"
#include "qwell/scf.hpp"

namespace qwell {

/// H1 distance between two potentials on a shared scaled grid, together with
/// the unscaled [0,1]-domain value obtained through the exact change-of-
/// variable factors: ||.||^2_{L2(0,1)} = eps^-3 ||.||^2_{L2(0,M)} and
/// eps^-5 for the seminorm. The scaled h1 field is the primary measurement.
struct PotentialDistance {
    double l2 = 0.0;
    double h1_semi = 0.0;
    double h1 = 0.0;
    double unscaled_l2 = 0.0;
    double unscaled_h1_semi = 0.0;
    double unscaled_h1 = 0.0;
};

inline PotentialDistance potential_distance(const GridFunction& a, const GridFunction& b,
                                            double eps) {
    if (!same_grid(a.grid, b.grid) || a.size() != b.size())
        throw InvalidArgument("potential_distance: grids differ");
    GridFunction d(a.grid);
    for (int i = 0; i < d.size(); ++i) d[i] = a[i] - b[i];
    PotentialDistance out;
    out.l2 = norm(d, NormKind::L2);
    out.h1_semi = norm(d, NormKind::H1Semi);
    out.h1 = std::sqrt(out.l2 * out.l2 + out.h1_semi * out.h1_semi);
    const double e3 = eps * eps * eps, e5 = e3 * eps * eps;
    out.unscaled_l2 = out.l2 / std::sqrt(e3);
    out.unscaled_h1_semi = out.h1_semi / std::sqrt(e5);
    out.unscaled_h1 = std::sqrt(out.unscaled_l2 * out.unscaled_l2 +
                                out.unscaled_h1_semi * out.unscaled_h1_semi);
    return out;
}

/// Restriction of the limit potential to [0, M]; exact nodewise when the
/// spacings match, linear interpolation otherwise.
inline GridFunction restrict_to(const GridFunction& src, const Grid& dst) {
    if (dst.length > src.grid.length * (1.0 + 1e-12))
        throw InvalidConfiguration("restrict_to: limit truncation shorter than target domain");
    GridFunction out(dst);
    const double hs = src.grid.h;
    for (int i = 0; i <= dst.n; ++i) {
        const double x = dst.node(i);
        const double t = x / hs;
        int j = std::min(static_cast<int>(t), src.grid.n - 1);
        const double w = t - j;
        out[i] = (1.0 - w) * src[j] + w * src[j + 1];
    }
    return out;
}

/// ||U_eps - U~_eps||_{H1(0,M)} (and the unscaled companion) at one eps.
inline PotentialDistance compare_full_vs_first(double eps, int n, double tol) {
    const SPSolution full = solve_full_boltzmann(eps, n, tol);
    const FirstLevelSolution first = solve_first_level(eps, n, tol);
    return potential_distance(full.U.f, first.U.f, eps);
}

/// ||U~_eps - U0||_{H1(0,M)} (and the unscaled companion) at one eps.
inline PotentialDistance compare_first_vs_limit(double eps, int n, double tol,
                                                const LimitSolution& limit) {
    const FirstLevelSolution first = solve_first_level(eps, n, tol);
    const GridFunction u0 = restrict_to(limit.U0.f, first.U.f.grid);
    return potential_distance(first.U.f, u0, eps);
}

/// E_2 - E_1 of H[U] on its own grid.
inline double gap_of(const Potential& U) {
    const Spectrum sp = lowest_eigenpairs(U, 2, U.grid());
    return sp.energies[1] - sp.energies[0];
}

/// E_2[U~_eps] - E_1[U~_eps] from a fresh single-level solve.
inline double spectral_gap(double eps, int n, double tol) {
    const FirstLevelSolution first = solve_first_level(eps, n, tol);
    return gap_of(first.U);
}

/// The four functional values of the energy-ordering chain
/// J~(U~) <= J~(U) <= J(U) <= J(U~), checked with slack 1e-8.
struct OrderingReport {
    double j_first_at_first = 0.0;  // J~_eps(U~_eps)
    double j_first_at_full = 0.0;   // J~_eps(U_eps)
    double j_full_at_full = 0.0;    // J_eps(U_eps)
    double j_full_at_first = 0.0;   // J_eps(U~_eps)
    bool chain_ok = false;
    /// | (J(U~)-J~(U~)) - eps^2 log(1 + sum_{p>=2} e^{-(E_p-E_1)/eps^2}) |;
    /// an algebraic identity when both sides share one spectrum.
    double identity_error = 0.0;
    double log_tail_term = 0.0;  // eps^2 log(1 + ...)
};

inline OrderingReport ordering_from(const Potential& u_full, const Potential& u_first,
                                    double eps) {
    const Grid& grid = u_full.grid();
    OrderingReport rep;
    const Spectrum sp_full =
        detail::spectrum_for_occupation(u_full, grid, eps, Statistics::Boltzmann);
    const OccupationSet occ_full = occupation_weights(sp_full, eps, Statistics::Boltzmann);
    const Spectrum sp_first =
        detail::spectrum_for_occupation(u_first, grid, eps, Statistics::Boltzmann);
    const OccupationSet occ_first = occupation_weights(sp_first, eps, Statistics::Boltzmann);

    rep.j_first_at_first = functional_first_from_spectrum(u_first, sp_first);
    rep.j_first_at_full = functional_first_from_spectrum(u_full, sp_full);
    rep.j_full_at_full = functional_full_from_spectrum(u_full, sp_full, occ_full, eps);
    rep.j_full_at_first = functional_full_from_spectrum(u_first, sp_first, occ_first, eps);

    constexpr double slack = 1e-8;
    rep.chain_ok = rep.j_first_at_first <= rep.j_first_at_full + slack &&
                   rep.j_first_at_full <= rep.j_full_at_full + slack &&
                   rep.j_full_at_full <= rep.j_full_at_first + slack;

    const double eps2 = eps * eps;
    double tail = 0.0;
    for (int p = 2; p <= occ_first.levels_used; ++p)
        tail += std::exp(-(sp_first.energy(p) - sp_first.energy(1)) / eps2);
    rep.log_tail_term = eps2 * std::log1p(tail);
    rep.identity_error =
        std::abs((rep.j_full_at_first - rep.j_first_at_first) - rep.log_tail_term);
    return rep;
}

inline OrderingReport energy_ordering_check(double eps, int n, double tol) {
    const SPSolution full = solve_full_boltzmann(eps, n, tol);
    const FirstLevelSolution first = solve_first_level(eps, n, tol);
    return ordering_from(full.U, first.U, eps);
}

/// sum_{p>=2} f_FD((E_p - eps_F)/eps^2) / f_FD((E_1 - eps_F)/eps^2) of a
/// converged Fermi-Dirac solution.
inline double fd_tail_ratio_from(const SPSolution& fd) {
    const double eps2 = fd.epsilon * fd.epsilon;
    const double ef = fd.occupation.fermi_level;
    double tail = 0.0;
    for (int p = 2; p <= fd.spectrum.count(); ++p)
        tail += fermi_dirac_f((fd.spectrum.energy(p) - ef) / eps2);
    return tail / fermi_dirac_f((fd.spectrum.energy(1) - ef) / eps2);
}

inline double fd_tail_ratio(double eps, int n, double tol) {
    return fd_tail_ratio_from(solve_full_fermi_dirac(eps, n, tol));
}

/// |sum_p f_FD - 1/eps^3| / (1/eps^3) == |sum_p w_p - 1| of a converged
/// Fermi-Dirac solution.
inline double fd_constraint_residual_from(const SPSolution& fd) {
    double s = 0.0;
    for (double w : fd.occupation.weights) s += w;
    return std::abs(s - 1.0);
}

struct SweepConfig {
    std::vector<double> epsilons{0.35, 0.30, 0.25, 0.20, 0.15};
    double h = 0.005;  // fixed spacing in xi; n grows like 1/eps
    double tol = 1e-11;
    bool include_fermi_dirac = false;
    double limit_xi0 = 20.0;
    int threads = 0;  // 0: QWELL_SP_THREADS env or hardware
};

struct SweepEntry {
    double epsilon = 0.0;
    int n = 0;
    bool ok = false;
    std::string failure;
    PotentialDistance full_vs_first;
    bool full_vs_first_floored = false;
    PotentialDistance first_vs_limit;
    bool first_vs_limit_floored = false;
    double gap = 0.0;
    OrderingReport ordering;
    double fd_constraint_residual = 0.0;
    double fd_tail_ratio = 0.0;
    bool fd_ok = false;
    std::string fd_failure;
};

struct ConvergenceReport {
    std::vector<double> epsilons;
    double h = 0.0;
    double tol = 0.0;
    double floor_estimate = 0.0;  // solver-residual floor for measured distances
    bool include_fermi_dirac = false;
    double limit_truncation = 0.0;
    double limit_e10 = 0.0;
    std::vector<SweepEntry> entries;
    bool fit_full_first_available = false;
    RateFit fit_full_first;   // model exp(-c/eps^2)
    bool fit_first_limit_available = false;
    RateFit fit_first_limit;  // model exp(-c/eps)
    double min_gap = 0.0;
    bool chain_all_ok = false;
};

namespace detail {

inline int sweep_thread_count(const SweepConfig& config, std::size_t jobs) {
    int t = config.threads;
    if (t <= 0) {
        if (const char* env = std::getenv("QWELL_SP_THREADS")) t = std::atoi(env);
        if (t <= 0) t = static_cast<int>(std::thread::hardware_concurrency());
        if (t <= 0) t = 1;
    }
    return std::max(1, std::min<int>(t, static_cast<int>(jobs)));
}

} // namespace detail

/// Runs every per-eps comparison of the default experiment and fits both
/// decay models over the non-floored points. Per-eps work is independent and
/// runs on up to QWELL_SP_THREADS workers; the report is assembled in eps
/// order regardless of completion order. Points whose measured distance is
/// below 10x the solver floor are excluded from the fits.
inline ConvergenceReport run_epsilon_sweep(const SweepConfig& config) {
    if (config.epsilons.empty()) throw InvalidArgument("run_epsilon_sweep: no epsilons");
    for (double e : config.epsilons)
        if (!(e > 0.0 && e < 1.0))
            throw InvalidArgument("run_epsilon_sweep: epsilons must lie in (0,1)");
    for (std::size_t i = 1; i < config.epsilons.size(); ++i)
        if (config.epsilons[i] >= config.epsilons[i - 1])
            throw InvalidArgument("run_epsilon_sweep: epsilons must be strictly descending");

    ConvergenceReport report;
    report.epsilons = config.epsilons;
    report.h = config.h;
    report.tol = config.tol;
    report.floor_estimate = 10.0 * config.tol;
    report.include_fermi_dirac = config.include_fermi_dirac;

    // shared limit profile: needs Xi >= max M_eps, computed once up front
    const double m_max = 1.0 / config.epsilons.back();
    const double xi0 = std::max(config.limit_xi0, std::max(10.0, m_max));
    const int n0 = std::max(1000, static_cast<int>(std::lround(xi0 / config.h)));
    const LimitSolution limit = solve_limit_problem(n0 * config.h, n0, config.tol);
    report.limit_truncation = limit.truncation;
    report.limit_e10 = limit.e10;

    report.entries.resize(config.epsilons.size());
    auto run_one = [&](std::size_t idx) {
        SweepEntry& entry = report.entries[idx];
        const double eps = config.epsilons[idx];
        entry.epsilon = eps;
        const int n = static_cast<int>(std::lround(1.0 / (eps * config.h)));
        entry.n = n;
        try {
            const SPSolution full = solve_full_boltzmann(eps, n, config.tol);
            const FirstLevelSolution first = solve_first_level(eps, n, config.tol);
            entry.full_vs_first = potential_distance(full.U.f, first.U.f, eps);
            const GridFunction u0 = restrict_to(limit.U0.f, first.U.f.grid);
            entry.first_vs_limit = potential_distance(first.U.f, u0, eps);
            entry.gap = gap_of(first.U);
            entry.ordering = ordering_from(full.U, first.U, eps);
            entry.full_vs_first_floored = entry.full_vs_first.h1 < 10.0 * report.floor_estimate;
            entry.first_vs_limit_floored = entry.first_vs_limit.h1 < 10.0 * report.floor_estimate;
            entry.ok = true;
        } catch (const Error& e) {
            entry.ok = false;
            entry.failure = e.what();
        }
        if (config.include_fermi_dirac) {
            try {
                const SPSolution fd = solve_full_fermi_dirac(eps, n, config.tol);
                entry.fd_constraint_residual = fd_constraint_residual_from(fd);
                entry.fd_tail_ratio = fd_tail_ratio_from(fd);
                entry.fd_ok = true;
            } catch (const Error& e) {
                entry.fd_ok = false;
                entry.fd_failure = e.what();
            }
        }
    };

    const int workers = detail::sweep_thread_count(config, config.epsilons.size());
    if (workers <= 1) {
        for (std::size_t i = 0; i < config.epsilons.size(); ++i) run_one(i);
    } else {
        // static striping keeps the assignment deterministic
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                for (std::size_t i = static_cast<std::size_t>(w); i < config.epsilons.size();
                     i += static_cast<std::size_t>(workers))
                    run_one(i);
            });
        }
        for (auto& t : pool) t.join();
    }

    if (std::none_of(report.entries.begin(), report.entries.end(),
                     [](const SweepEntry& e) { return e.ok; }))
        throw SweepFailure("run_epsilon_sweep: every epsilon failed");

    std::vector<std::pair<double, double>> ff, fl;
    bool chain_all = true;
    double min_gap = std::numeric_limits<double>::max();
    for (const SweepEntry& e : report.entries) {
        if (!e.ok) { chain_all = false; continue; }
        chain_all = chain_all && e.ordering.chain_ok;
        min_gap = std::min(min_gap, e.gap);
        if (!e.full_vs_first_floored) ff.emplace_back(e.epsilon, e.full_vs_first.h1);
        if (!e.first_vs_limit_floored) fl.emplace_back(e.epsilon, e.first_vs_limit.h1);
    }
    report.chain_all_ok = chain_all;
    report.min_gap = (min_gap == std::numeric_limits<double>::max()) ? 0.0 : min_gap;
    if (ff.size() >= 3) {
        report.fit_full_first = fit_exponential_rate(ff, 2);
        report.fit_full_first_available = true;
    }
    if (fl.size() >= 3) {
        report.fit_first_limit = fit_exponential_rate(fl, 1);
        report.fit_first_limit_available = true;
    }
    return report;
}

} // namespace qwell
