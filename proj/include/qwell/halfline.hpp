#pragma once

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "qwell/grid.hpp"
#include "qwell/rate_fit.hpp"
#include "qwell/scf.hpp"
#include "qwell/spectrum.hpp"

namespace qwell {

/// Lowest mode of the truncated half-line operator plus its confinement
/// certificate: the L2 mass of the state beyond 0.9 * truncation.
struct FundamentalMode {
    double energy = 0.0;
    double tail_mass = 0.0;
    bool confined() const { return tail_mass <= 1e-10; }
};

namespace detail {

inline void check_halfline_potential(const Potential& U, const Grid& grid, const char* who) {
    check_on_grid(U.f, grid, who);
    for (double v : U.f.values)
        if (v < -1e-12) throw InvalidArgument(std::string(who) + ": potential must be nonnegative");
}

} // namespace detail

/// Lowest Dirichlet eigenvalue on the truncated domain together with the tail
/// mass. Does not throw on an unconfined state; see fundamental_mode for the
/// checked variant.
inline FundamentalMode fundamental_mode_info(const Potential& U, const Grid& grid) {
    detail::check_halfline_potential(U, grid, "fundamental_mode");
    const Spectrum sp = lowest_eigenpairs(U, 1, grid);
    const GridFunction& psi = sp.states.front();
    const int i0 = static_cast<int>(std::ceil(0.9 * grid.n));
    double mass = 0.0;
    for (int i = i0; i < grid.n; ++i) {
        const double a = psi[i] * psi[i], b = psi[i + 1] * psi[i + 1];
        mass += 0.5 * (a + b) * grid.h;
    }
    return FundamentalMode{sp.energies.front(), mass};
}

/// Checked stand-in for the half-line fundamental mode: valid only when the
/// state is confined well inside the truncated domain.
inline double fundamental_mode(const Potential& U, const Grid& grid) {
    const FundamentalMode fm = fundamental_mode_info(U, grid);
    if (!fm.confined())
        throw TruncationTooSmall("fundamental_mode: state not confined (tail mass " +
                                     std::to_string(fm.tail_mass) + "); enlarge the domain",
                                 1.5 * grid.length);
    return fm.energy;
}

/// J_0(U) = (1/2)∫|U'|^2 - E_1[U] on the truncated domain. Uses the
/// uncertified mode so the degenerate U == 0 case evaluates to -pi^2/Xi^2.
inline double evaluate_j0(const Potential& U, const Grid& grid) {
    if (U.f[0] != 0.0) throw InvalidArgument("evaluate_j0: U(0) must vanish");
    return dirichlet_energy(U.f) - fundamental_mode_info(U, grid).energy;
}

struct ScalingEntry {
    double alpha = 0.0;
    double energy = 0.0;
    double ratio = 0.0;     // E[alpha sqrt(xi)] / E[sqrt(xi)]
    double expected = 0.0;  // alpha^{4/5}
    double deviation = 0.0;
    double truncation = 0.0;
};

struct ScalingReport {
    double base_energy = 0.0;
    double base_truncation = 0.0;
    std::vector<ScalingEntry> entries;
    double max_deviation = 0.0;
};

struct ScalingGridParams {
    double xi_base = 40.0;  // truncation for alpha = 1
    double h = 0.005;       // shared spacing
};

/// Verifies E_1[alpha sqrt(xi)] = alpha^{4/5} E_1[sqrt(xi)] on truncations
/// adapted per alpha (weaker confinement needs a longer domain: the state
/// width scales like alpha^{-2/5}).
inline ScalingReport check_scaling_law(const std::vector<double>& alphas,
                                       const ScalingGridParams& params = {}) {
    for (double a : alphas)
        if (!(a > 0.0)) throw InvalidArgument("check_scaling_law: alphas must be positive");
    auto mode_for = [&](double alpha) {
        const double xi = std::max(20.0, params.xi_base * std::pow(alpha, -0.4));
        const int n = static_cast<int>(std::lround(xi / params.h));
        const Grid g = make_grid(n * params.h, n);
        GridFunction f = sample(g, [alpha](double x) { return alpha * std::sqrt(x); });
        const Potential U{std::move(f), 0.0, RightBc::Free, true};
        return std::pair<double, double>{fundamental_mode(U, g), g.length};
    };
    ScalingReport report;
    const auto [base, base_xi] = mode_for(1.0);
    report.base_energy = base;
    report.base_truncation = base_xi;
    for (double a : alphas) {
        const auto [e, xi] = mode_for(a);
        ScalingEntry entry;
        entry.alpha = a;
        entry.energy = e;
        entry.ratio = e / base;
        entry.expected = std::pow(a, 0.8);
        entry.deviation = std::abs(entry.ratio - entry.expected);
        entry.truncation = xi;
        report.entries.push_back(entry);
        report.max_deviation = std::max(report.max_deviation, entry.deviation);
    }
    return report;
}

/// Solution of the half-line limit system on [0, Xi].
struct LimitSolution {
    double truncation = 0.0;  // Xi
    Potential U0;
    double e10 = 0.0;
    GridFunction psi10;
    double u_limit_estimate = 0.0;  // U0(Xi), a lower proxy for lim U0
    double j0_value = 0.0;
    int iterations = 0;
    // doubling evidence: (Xi, e10) per stage
    std::vector<std::pair<double, double>> stage_history;
};

/// Solves the limit system on a truncated half line through the sphere
/// formulation, doubling Xi (same spacing) until e10 moves by less than 1e-8.
inline LimitSolution solve_limit_problem(double xi_max, int n, double tol) {
    if (!(xi_max >= 10.0)) throw InvalidArgument("solve_limit_problem: xi_max must be >= 10");
    if (n < 1000) throw InvalidArgument("solve_limit_problem: n must be >= 1000");
    constexpr double xi_cap = 640.0;

    LimitSolution out;
    double xi = xi_max;
    int scale = 1;
    FirstLevelSolution stage = minimize_sphere_functional(xi, n, tol);
    out.stage_history.emplace_back(xi, stage.e1);
    for (;;) {
        if (2.0 * xi > xi_cap)
            throw TruncationTooSmall("solve_limit_problem: doubling cap exceeded before e10 settled",
                                     2.0 * xi);
        scale *= 2;
        FirstLevelSolution next = minimize_sphere_functional(2.0 * xi, n * scale, tol);
        out.stage_history.emplace_back(2.0 * xi, next.e1);
        const bool settled = std::abs(next.e1 - stage.e1) < 1e-8;
        xi *= 2.0;
        stage = std::move(next);
        if (settled) break;
    }

    out.truncation = xi;
    out.U0 = stage.U;
    out.e10 = stage.e1;
    out.psi10 = stage.psi1;
    out.u_limit_estimate = stage.U.f[stage.U.f.grid.n];
    out.j0_value = dirichlet_energy(stage.U.f) - stage.e1;
    out.iterations = stage.iterations;
    return out;
}

/// Exponential tail fit of psi_{1,0}: least squares on log psi over the
/// window where the barrier U0 - e10 exceeds half its final value, the state
/// is above numerical noise, and the artificial Dirichlet end is far away.
/// The barrier bound predicts a rate near sqrt(U0(Xi) - e10).
inline RateFit tail_decay_fit(const LimitSolution& sol) {
    const Grid& g = sol.U0.f.grid;
    const double barrier = sol.u_limit_estimate - sol.e10;
    double psi_max = 0.0;
    for (double v : sol.psi10.values) psi_max = std::max(psi_max, std::abs(v));
    std::vector<double> xs, ys;
    for (int i = 0; i <= g.n; ++i) {
        const double x = g.node(i);
        if (sol.U0.f[i] - sol.e10 < 0.5 * barrier) continue;
        if (x > 0.9 * g.length) break;
        const double p = sol.psi10[i];
        if (p <= 1e-9 * psi_max) break;  // below solver noise
        xs.push_back(x);
        ys.push_back(std::log(p));
    }
    if (xs.size() < 16 || xs.back() - xs.front() < 2.0)
        throw FitWindowError("tail_decay_fit: usable window too short");
    const double m = static_cast<double>(xs.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) { mx += xs[i]; my += ys[i]; }
    mx /= m; my /= m;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double dx = xs[i] - mx, dy = ys[i] - my;
        sxx += dx * dx; sxy += dx * dy; syy += dy * dy;
    }
    RateFit fit;
    fit.model_exponent = 1;
    fit.rate_c = -sxy / sxx;
    fit.log_prefactor = my + fit.rate_c * mx;
    fit.r_squared = (syy > 0.0) ? (sxy * sxy) / (sxx * syy) : 1.0;
    return fit;
}

} // namespace qwell
