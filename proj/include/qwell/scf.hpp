#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "qwell/functionals.hpp"
#include "qwell/grid.hpp"
#include "qwell/occupation.hpp"
#include "qwell/poisson.hpp"
#include "qwell/spectrum.hpp"

namespace qwell {

/// Converged all-levels solution on the scaled domain [0, 1/eps].
struct SPSolution {
    double epsilon = 0.0;
    Potential U;
    Spectrum spectrum;
    OccupationSet occupation;
    double functional_value = 0.0;
    double residual_h1 = 0.0;
    int iterations = 0;
    std::vector<double> functional_trace;  // accepted-step values
};

/// Converged single-level solution (either variational route).
struct FirstLevelSolution {
    double epsilon = 0.0;
    Potential U;
    double e1 = 0.0;
    GridFunction psi1;
    double multiplier = 0.0;
    double functional_value = 0.0;
    double residual_h1 = 0.0;
    int iterations = 0;
    std::vector<double> functional_trace;
};

namespace detail {

inline GridFunction blend(const GridFunction& a, const GridFunction& b, double theta) {
    GridFunction out(a.grid);
    for (int i = 0; i < out.size(); ++i) out[i] = (1.0 - theta) * a[i] + theta * b[i];
    return out;
}

inline double h1_distance(const GridFunction& a, const GridFunction& b) {
    GridFunction d(a.grid);
    for (int i = 0; i < d.size(); ++i) d[i] = a[i] - b[i];
    return norm(d, NormKind::H1);
}

// functional comparisons carry eigen-bisection noise ~1e-12*(1+|E|)
inline double functional_slack(double J) { return 2.5e-12 * (1.0 + std::abs(J)); }

} // namespace detail

/// Damped self-consistent iteration U <- (1-theta) U + theta Poisson(rho[U])
/// minimizing the full-statistics energy. theta starts at 0.5, halves when the
/// functional would increase, doubles (up to 1) after 3 accepted steps.
inline SPSolution solve_full(double eps, int n, double tol, Statistics statistics,
                             int max_iterations = 500) {
    if (!(eps > 0.0 && eps < 1.0))
        throw InvalidArgument("solve_full: epsilon must lie in (0,1)");
    const Grid grid = make_grid(1.0 / eps, n);

    SPSolution sol;
    sol.epsilon = eps;
    sol.U = Potential{GridFunction(grid, 0.0), 0.0, RightBc::NeumannZero, true};
    sol.spectrum = detail::spectrum_for_occupation(sol.U, grid, eps, statistics);
    sol.occupation = occupation_weights(sol.spectrum, eps, statistics);
    double J = functional_full_from_spectrum(sol.U, sol.spectrum, sol.occupation, eps);
    sol.functional_trace.push_back(J);

    double theta = 0.5;
    int accepted_run = 0;
    double res = 0.0;
    for (int it = 1; it <= max_iterations; ++it) {
        const GridFunction rho = charge_density(sol.spectrum, sol.occupation);
        const Potential P = solve_poisson(rho, grid);
        res = detail::h1_distance(sol.U.f, P.f);
        if (res <= tol) {
            sol.functional_value = J;
            sol.residual_h1 = res;
            sol.iterations = it - 1;
            return sol;
        }
        bool accepted = false;
        while (!accepted) {
            Potential trial{detail::blend(sol.U.f, P.f, theta), 0.0, RightBc::NeumannZero, true};
            Spectrum sp = detail::spectrum_for_occupation(trial, grid, eps, statistics,
                                                          sol.spectrum.count());
            OccupationSet occ = occupation_weights(sp, eps, statistics);
            const double J_trial = functional_full_from_spectrum(trial, sp, occ, eps);
            if (J_trial <= J + detail::functional_slack(J)) {
                sol.U = std::move(trial);
                sol.spectrum = std::move(sp);
                sol.occupation = std::move(occ);
                J = J_trial;
                sol.functional_trace.push_back(J);
                accepted = true;
                if (++accepted_run >= 3) { theta = std::min(2.0 * theta, 1.0); accepted_run = 0; }
            } else {
                theta *= 0.5;
                accepted_run = 0;
                if (theta < 1e-10)
                    throw NonConvergence("solve_full: damping collapsed without progress", res);
            }
        }
    }
    throw NonConvergence("solve_full: no convergence after " + std::to_string(max_iterations) +
                             " iterations (residual " + std::to_string(res) + ")",
                         res);
}

inline SPSolution solve_full_boltzmann(double eps, int n, double tol) {
    return solve_full(eps, n, tol, Statistics::Boltzmann);
}

/// Fermi-Dirac variant; the Fermi level is re-solved every outer iteration.
inline SPSolution solve_full_fermi_dirac(double eps, int n, double tol) {
    return solve_full(eps, n, tol, Statistics::FermiDirac);
}

/// Minimizes J~_eps(U) = (1/2)∫|U'|^2 - E_1[U] over H^{1,0} by gradient
/// descent with Armijo backtracking. The gradient is represented through the
/// H^{1,0} Riesz lift of |psi_1|^2, i.e. g = U - Poisson(|psi_1[U]|^2), so the
/// unit step is the plain fixed-point sweep.
inline FirstLevelSolution solve_first_level(double eps, int n, double tol,
                                            int max_iterations = 500) {
    if (!(eps > 0.0 && eps < 1.0))
        throw InvalidArgument("solve_first_level: epsilon must lie in (0,1)");
    const Grid grid = make_grid(1.0 / eps, n);

    Potential U{GridFunction(grid, 0.0), 0.0, RightBc::NeumannZero, true};
    Spectrum sp = lowest_eigenpairs(U, 1, grid);
    double J = functional_first_from_spectrum(U, sp);

    FirstLevelSolution sol;
    sol.epsilon = eps;
    sol.functional_trace.push_back(J);

    double res = 0.0;
    for (int it = 1; it <= max_iterations; ++it) {
        GridFunction rho(grid);
        const GridFunction& psi = sp.states.front();
        for (int i = 0; i <= grid.n; ++i) rho[i] = psi[i] * psi[i];
        const Potential P = solve_poisson(rho, grid);
        GridFunction g(grid);
        for (int i = 0; i <= grid.n; ++i) g[i] = U.f[i] - P.f[i];
        res = norm(g, NormKind::H1);
        if (res <= tol) {
            sol.U = U;
            sol.e1 = sp.energies.front();
            sol.psi1 = sp.states.front();
            sol.multiplier = sol.e1;
            sol.functional_value = J;
            sol.residual_h1 = res;
            sol.iterations = it - 1;
            return sol;
        }
        const double gsq = norm(g, NormKind::H1Semi) * norm(g, NormKind::H1Semi);
        double tau = 1.0;
        for (;;) {
            Potential trial{detail::blend(U.f, P.f, tau), 0.0, RightBc::NeumannZero, true};
            Spectrum sp_t = lowest_eigenpairs(trial, 1, grid);
            const double J_t = functional_first_from_spectrum(trial, sp_t);
            if (J_t <= J - 1e-4 * tau * gsq + detail::functional_slack(J)) {
                U = std::move(trial);
                sp = std::move(sp_t);
                J = J_t;
                sol.functional_trace.push_back(J);
                break;
            }
            tau *= 0.5;
            if (tau < 1e-10)
                throw NonConvergence("solve_first_level: backtracking collapsed", res);
        }
    }
    throw NonConvergence("solve_first_level: no convergence after " +
                             std::to_string(max_iterations) + " iterations",
                         res);
}

/// Minimizes A(phi) = ∫|phi'|^2 + (1/2)∬ phi^2(x) phi^2(y) min(x,y) dx dy over
/// the unit L2 sphere by a normalized gradient flow in phi. Steps are
/// semi-implicit, phi <- normalize(|(I + tau H[U(phi)])^{-1} phi|), with
/// backtracking on tau so A never increases (the explicit Euler form would
/// need tau = O(h^2)). U(phi) is the Poisson lift of phi^2; A(|phi|) = A(phi)
/// is exploited by taking |phi| each step. Success means the sphere gradient
/// 2(H phi - mu phi) has L2 norm at most tol.
inline FirstLevelSolution minimize_sphere_functional(double domain_length, int n, double tol,
                                                     int max_iterations = 2000) {
    if (!(domain_length > 0.0))
        throw InvalidArgument("minimize_sphere_functional: domain_length must be positive");
    const Grid grid = make_grid(domain_length, n);
    const double h = grid.h;
    const int m = grid.n - 1;

    // ground-like start: the first box mode
    GridFunction phi(grid, 0.0);
    for (int i = 1; i < grid.n; ++i)
        phi[i] = std::sin(3.14159265358979323846 * grid.node(i) / domain_length);
    {
        const double nrm = norm(phi, NormKind::L2);
        for (double& v : phi.values) v /= nrm;
    }

    auto density = [&](const GridFunction& p) {
        GridFunction rho(grid);
        for (int i = 0; i <= grid.n; ++i) rho[i] = p[i] * p[i];
        return rho;
    };
    auto energy_a = [&](const GridFunction& p, const Potential& Up) {
        GridFunction u_rho(grid);
        for (int i = 0; i <= grid.n; ++i) u_rho[i] = Up.f[i] * p[i] * p[i];
        const double kin = norm(p, NormKind::H1Semi);
        return kin * kin + 0.5 * integrate(u_rho);
    };

    Potential U = solve_poisson(density(phi), grid);
    double A = energy_a(phi, U);
    double tau = 1.0;
    double grad_norm = 0.0;

    FirstLevelSolution sol;
    sol.epsilon = 1.0 / domain_length;
    sol.functional_trace.push_back(A);

    for (int it = 1; it <= max_iterations; ++it) {
        const TridiagonalSystem H = assemble_hamiltonian(U, grid);
        std::vector<double> v(static_cast<std::size_t>(m));
        for (int i = 1; i < grid.n; ++i) v[static_cast<std::size_t>(i - 1)] = phi[i];
        const std::vector<double> Hv = multiply(H, v);
        double mu = 0.0;
        for (int i = 0; i < m; ++i) mu += Hv[static_cast<std::size_t>(i)] * v[static_cast<std::size_t>(i)];
        mu *= h;
        double rs = 0.0;
        for (int i = 0; i < m; ++i) {
            const double r = Hv[static_cast<std::size_t>(i)] - mu * v[static_cast<std::size_t>(i)];
            rs += r * r;
        }
        grad_norm = 2.0 * std::sqrt(h * rs);
        if (grad_norm <= tol) {
            const Spectrum sp = lowest_eigenpairs(H, 1, grid);
            sol.U = U;
            sol.e1 = sp.energies.front();
            sol.psi1 = phi;
            sol.multiplier = mu;
            sol.functional_value = dirichlet_energy(U.f) - sol.e1;
            sol.residual_h1 = grad_norm;
            sol.iterations = it - 1;
            return sol;
        }
        for (;;) {
            TridiagonalSystem M;  // I + tau H
            M.diag.resize(static_cast<std::size_t>(m));
            M.off.resize(static_cast<std::size_t>(m - 1));
            for (int i = 0; i < m; ++i) M.diag[static_cast<std::size_t>(i)] = 1.0 + tau * H.diag[static_cast<std::size_t>(i)];
            for (int i = 0; i + 1 < m; ++i) M.off[static_cast<std::size_t>(i)] = tau * H.off[static_cast<std::size_t>(i)];
            std::vector<double> w = solve_tridiagonal(M, v);
            GridFunction cand(grid, 0.0);
            for (int i = 1; i < grid.n; ++i) cand[i] = std::abs(w[static_cast<std::size_t>(i - 1)]);
            const double nrm = norm(cand, NormKind::L2);
            for (double& x : cand.values) x /= nrm;
            Potential U_t = solve_poisson(density(cand), grid);
            const double A_t = energy_a(cand, U_t);
            if (A_t <= A + 1e-13 * (1.0 + std::abs(A))) {
                phi = std::move(cand);
                U = std::move(U_t);
                A = A_t;
                sol.functional_trace.push_back(A);
                tau = std::min(tau * 1.5, 16.0);
                break;
            }
            tau *= 0.5;
            if (tau < 1e-12)
                throw NonConvergence("minimize_sphere_functional: step collapsed", grad_norm);
        }
    }
    throw NonConvergence("minimize_sphere_functional: no convergence after " +
                             std::to_string(max_iterations) + " steps",
                         grad_norm);
}

} // namespace qwell
