#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "qwell/grid.hpp"
#include "qwell/tridiagonal.hpp"

namespace qwell {

enum class RightBc { NeumannZero, DirichletZero, Free };

/// A potential on a grid with its boundary-condition tags. Wavefunctions are
/// always Dirichlet at both ends; these tags describe the potential itself.
struct Potential {
    GridFunction f;
    double left_bc = 0.0;
    RightBc right_bc = RightBc::Free;
    bool nonneg = false;

    double operator[](int i) const { return f[i]; }
    const Grid& grid() const { return f.grid; }
};

inline Potential make_potential(GridFunction f, double left_bc = 0.0,
                                RightBc right_bc = RightBc::Free, bool nonneg = false) {
    if (nonneg)
        for (double v : f.values)
            if (v < -1e-12) throw InvalidArgument("Potential: nonneg flag with negative values");
    return Potential{std::move(f), left_bc, right_bc, nonneg};
}

/// Ascending simple eigenvalues with L2-orthonormal states, zero at both
/// endpoints, sign fixed by psi'(0) > 0.
struct Spectrum {
    Grid grid;
    std::vector<double> energies;
    std::vector<GridFunction> states;

    int count() const { return static_cast<int>(energies.size()); }
    double energy(int p) const { return energies[static_cast<std::size_t>(p - 1)]; }      // 1-based
    const GridFunction& state(int p) const { return states[static_cast<std::size_t>(p - 1)]; }
};

/// Interior-node discretization of -d^2/dx^2 + V with homogeneous Dirichlet
/// ends: size n-1, diag_i = 2/h^2 + V(x_i), off = -1/h^2.
inline TridiagonalSystem assemble_hamiltonian(const Potential& V, const Grid& grid) {
    check_on_grid(V.f, grid, "assemble_hamiltonian");
    const int m = grid.n - 1;
    const double inv_h2 = 1.0 / (grid.h * grid.h);
    TridiagonalSystem sys;
    sys.diag.resize(static_cast<std::size_t>(m));
    sys.off.assign(static_cast<std::size_t>(m - 1), -inv_h2);
    for (int i = 1; i < grid.n; ++i) sys.diag[static_cast<std::size_t>(i - 1)] = 2.0 * inv_h2 + V[i];
    return sys;
}

namespace detail {

/// Number of eigenvalues of the symmetric tridiagonal strictly below lambda
/// (Sturm sequence count).
inline int sturm_count(const TridiagonalSystem& sys, double lambda, double pivmin) {
    const int m = sys.size();
    int count = 0;
    double q = sys.diag[0] - lambda;
    if (q < 0.0) ++count;
    for (int i = 1; i < m; ++i) {
        if (std::abs(q) < pivmin) q = (q < 0.0) ? -pivmin : pivmin;
        q = sys.diag[i] - lambda - sys.off[i - 1] * sys.off[i - 1] / q;
        if (q < 0.0) ++count;
    }
    return count;
}

/// p-th smallest eigenvalue (1-based) by bisection, run to interval
/// exhaustion (well past the contract's 1e-12 * (1 + |E|)); keeps central
/// finite differences of eigenvalues usable at t = 1e-5.
inline double bisect_eigenvalue(const TridiagonalSystem& sys, int p, double lo, double hi,
                                double pivmin) {
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (sturm_count(sys, mid, pivmin) >= p) hi = mid;
        else lo = mid;
    }
    return 0.5 * (lo + hi);
}

inline void gershgorin_bounds(const TridiagonalSystem& sys, double& lo, double& hi) {
    const int m = sys.size();
    lo = std::numeric_limits<double>::max();
    hi = std::numeric_limits<double>::lowest();
    for (int i = 0; i < m; ++i) {
        double r = 0.0;
        if (i > 0) r += std::abs(sys.off[i - 1]);
        if (i + 1 < m) r += std::abs(sys.off[i]);
        lo = std::min(lo, sys.diag[i] - r);
        hi = std::max(hi, sys.diag[i] + r);
    }
}

} // namespace detail

/// The k lowest eigenpairs of H. Eigenvalues by Sturm-sequence bisection,
/// eigenvectors by shifted inverse iteration (pivoted LU), embedded on the
/// grid with zero endpoints, trapezoid-L2-normalized, psi'(0) > 0.
inline Spectrum lowest_eigenpairs(const TridiagonalSystem& H, int k, const Grid& grid) {
    const int m = H.size();
    if (m != grid.n - 1)
        throw InvalidArgument("lowest_eigenpairs: system size does not match grid");
    if (k < 1 || k > m / 4)
        throw InvalidArgument("lowest_eigenpairs: k must lie in [1, size/4]");

    double lo, hi;
    detail::gershgorin_bounds(H, lo, hi);
    double off_max = 0.0;
    for (double e : H.off) off_max = std::max(off_max, std::abs(e));
    const double pivmin = std::max(off_max * off_max, 1.0) * std::numeric_limits<double>::min() * 4.0;
    const double scale = std::max(std::abs(lo), std::abs(hi));

    Spectrum sp;
    sp.grid = grid;
    sp.energies.resize(static_cast<std::size_t>(k));
    for (int p = 1; p <= k; ++p)
        sp.energies[static_cast<std::size_t>(p - 1)] = detail::bisect_eigenvalue(H, p, lo, hi, pivmin);

    // inverse iteration, orthogonalizing against already-computed levels
    std::vector<std::vector<double>> vecs;
    vecs.reserve(static_cast<std::size_t>(k));
    for (int p = 1; p <= k; ++p) {
        const double E = sp.energies[static_cast<std::size_t>(p - 1)];
        const double shift = E + 1e-10 * (1.0 + std::abs(E));
        detail::ShiftedTridiagonalLU lu(H, shift);
        std::vector<double> v(static_cast<std::size_t>(m));
        // deterministic start, nonorthogonal to anything in practice
        for (int i = 0; i < m; ++i)
            v[static_cast<std::size_t>(i)] = std::sin((p + 0.7) * (i + 1) * 1.61803398875) + 0.25;
        bool converged = false;
        for (int iter = 0; iter < 50; ++iter) {
            lu.solve_inplace(v);
            for (const auto& w : vecs) {
                double dot = 0.0;
                for (int i = 0; i < m; ++i) dot += v[static_cast<std::size_t>(i)] * w[static_cast<std::size_t>(i)];
                for (int i = 0; i < m; ++i) v[static_cast<std::size_t>(i)] -= dot * w[static_cast<std::size_t>(i)];
            }
            double nrm = 0.0;
            for (double x : v) nrm += x * x;
            nrm = std::sqrt(nrm);
            if (nrm == 0.0) continue;
            for (double& x : v) x /= nrm;
            // residual against the bisection eigenvalue
            double res = 0.0;
            const auto Hv = multiply(H, v);
            for (int i = 0; i < m; ++i)
                res = std::max(res, std::abs(Hv[static_cast<std::size_t>(i)] - E * v[static_cast<std::size_t>(i)]));
            if (res <= 1e-10 * (1.0 + scale)) { converged = true; break; }
        }
        if (!converged)
            throw NumericalFailure("lowest_eigenpairs: inverse iteration stalled at level " +
                                       std::to_string(p), p);
        vecs.push_back(v);
    }

    // embed with zero endpoints, normalize in the trapezoid L2, fix the sign
    sp.states.reserve(static_cast<std::size_t>(k));
    for (int p = 0; p < k; ++p) {
        GridFunction psi(grid, 0.0);
        for (int i = 1; i < grid.n; ++i) psi[i] = vecs[static_cast<std::size_t>(p)][static_cast<std::size_t>(i - 1)];
        const double nrm = norm(psi, NormKind::L2);
        double sign = 0.0;
        for (int i = 1; i < grid.n; ++i)
            if (psi[i] != 0.0) { sign = (psi[i] > 0.0) ? 1.0 : -1.0; break; }
        const double fac = sign / nrm;
        for (double& x : psi.values) x *= fac;
        sp.states.push_back(std::move(psi));
    }
    return sp;
}

inline Spectrum lowest_eigenpairs(const Potential& V, int k, const Grid& grid) {
    return lowest_eigenpairs(assemble_hamiltonian(V, grid), k, grid);
}

/// dE_p[V].W = ∫ |psi_p|^2 W dx by trapezoid quadrature.
inline double eigenvalue_derivative(const Potential& V, const GridFunction& W, int p,
                                    const Grid& grid) {
    check_on_grid(W, grid, "eigenvalue_derivative");
    const Spectrum sp = lowest_eigenpairs(assemble_hamiltonian(V, grid), p, grid);
    const GridFunction& psi = sp.state(p);
    GridFunction integrand(grid);
    for (int i = 0; i <= grid.n; ++i) integrand[i] = psi[i] * psi[i] * W[i];
    return integrate(integrand);
}

} // namespace qwell
