#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "qwell/grid.hpp"
#include "qwell/spectrum.hpp"
#include "qwell/tridiagonal.hpp"

namespace qwell {

namespace detail {

inline void check_density(const GridFunction& rho, const Grid& grid, const char* who) {
    check_on_grid(rho, grid, who);
    for (double v : rho.values)
        if (v < -1e-12) throw InvalidArgument(std::string(who) + ": density must be nonnegative");
}

} // namespace detail

/// Solves -U'' = rho with U(0) = 0 and U'(L) = 0. The Neumann end uses the
/// second-order ghost-point closure, symmetrized: (U_n - U_{n-1})/h^2 = rho_n/2.
/// Exact for quadratic U, so the whole pipeline stays O(h^2).
inline Potential solve_poisson(const GridFunction& rho, const Grid& grid) {
    detail::check_density(rho, grid, "solve_poisson");
    const int n = grid.n;
    const double inv_h2 = 1.0 / (grid.h * grid.h);
    TridiagonalSystem sys;
    sys.diag.assign(static_cast<std::size_t>(n), 2.0 * inv_h2);
    sys.diag.back() = inv_h2;
    sys.off.assign(static_cast<std::size_t>(n - 1), -inv_h2);
    std::vector<double> rhs(static_cast<std::size_t>(n));
    for (int i = 1; i < n; ++i) rhs[static_cast<std::size_t>(i - 1)] = rho[i];
    rhs.back() = 0.5 * rho[n];
    const std::vector<double> x = solve_tridiagonal(sys, rhs);
    GridFunction U(grid, 0.0);
    for (int i = 1; i <= n; ++i) U[i] = x[static_cast<std::size_t>(i - 1)];
    // maximum principle: rho >= 0 gives U >= 0; clip parasitic roundoff signs
    for (double& v : U.values) if (v < 0.0 && v > -1e-13) v = 0.0;
    return Potential{std::move(U), 0.0, RightBc::NeumannZero, true};
}

/// Same boundary-value problem through the explicit kernel of the 1D
/// Laplacian, U(xi) = ∫ rho(zeta) min(xi, zeta) dzeta, by direct double
/// quadrature. O(n^2); kept as the independent oracle for the fast path.
inline Potential greens_kernel_apply(const GridFunction& rho, const Grid& grid) {
    detail::check_density(rho, grid, "greens_kernel_apply");
    const int n = grid.n;
    const double h = grid.h;
    // trapezoid weights against min(xi_i, xi_j) = h*min(i,j)
    GridFunction U(grid, 0.0);
    for (int i = 0; i <= n; ++i) {
        double s = 0.0;
        for (int j = 0; j <= n; ++j) {
            const double w = (j == 0 || j == n) ? 0.5 : 1.0;
            s += w * rho[j] * static_cast<double>(std::min(i, j));
        }
        U[i] = s * h * h;
    }
    return Potential{std::move(U), 0.0, RightBc::NeumannZero, true};
}

} // namespace qwell
