#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "qwell/errors.hpp"

namespace qwell {

/// Uniform 1D mesh on [0, length] with n intervals (n+1 nodes at x_i = i*h).
struct Grid {
    double length = 1.0;
    int n = 0;
    double h = 0.0;

    double node(int i) const { return i * h; }
    int num_nodes() const { return n + 1; }
};

inline bool same_grid(const Grid& a, const Grid& b) {
    return a.n == b.n && std::abs(a.length - b.length) <= 1e-12 * (1.0 + std::abs(a.length));
}

constexpr int kMinIntervals = 32;  // guards against meaningless coarse runs

inline Grid make_grid(double length, int n) {
    if (!(length > 0.0) || !std::isfinite(length))
        throw InvalidArgument("make_grid: length must be positive and finite");
    if (n < kMinIntervals)
        throw InvalidArgument("make_grid: need at least 32 intervals");
    Grid g;
    g.length = length;
    g.n = n;
    g.h = length / n;
    return g;
}

/// Real-valued nodal samples on a Grid. The continuous object it stands for
/// is the piecewise-linear interpolant of the values.
struct GridFunction {
    Grid grid;
    std::vector<double> values;

    GridFunction() = default;
    explicit GridFunction(const Grid& g, double fill = 0.0)
        : grid(g), values(static_cast<std::size_t>(g.n) + 1, fill) {}

    double& operator[](int i) { return values[static_cast<std::size_t>(i)]; }
    double operator[](int i) const { return values[static_cast<std::size_t>(i)]; }
    int size() const { return static_cast<int>(values.size()); }
};

template <class F>
GridFunction sample(const Grid& g, F&& f) {
    GridFunction out(g);
    for (int i = 0; i <= g.n; ++i) out[i] = f(g.node(i));
    return out;
}

inline void check_on_grid(const GridFunction& f, const Grid& g, const char* who) {
    if (f.size() != g.n + 1 || !same_grid(f.grid, g))
        throw InvalidArgument(std::string(who) + ": grid mismatch");
}

/// Trapezoid rule; exact for affine functions on the mesh.
inline double integrate(const GridFunction& f) {
    const int n = f.grid.n;
    double s = 0.5 * (f[0] + f[n]);
    for (int i = 1; i < n; ++i) s += f[i];
    return s * f.grid.h;
}

enum class NormKind { L2, H1Semi, H1 };

/// L2 by trapezoid quadrature; the H1 seminorm is the exact Dirichlet energy
/// of the piecewise-linear interpolant (per-cell forward differences), so
/// norm(f,H1)^2 == norm(f,L2)^2 + norm(f,H1Semi)^2 identically.
inline double norm(const GridFunction& f, NormKind kind) {
    const int n = f.grid.n;
    const double h = f.grid.h;
    auto l2sq = [&] {
        double s = 0.5 * (f[0] * f[0] + f[n] * f[n]);
        for (int i = 1; i < n; ++i) s += f[i] * f[i];
        return s * h;
    };
    auto semisq = [&] {
        double s = 0.0;
        for (int i = 0; i < n; ++i) {
            const double d = f[i + 1] - f[i];
            s += d * d;
        }
        return s / h;
    };
    switch (kind) {
        case NormKind::L2: return std::sqrt(l2sq());
        case NormKind::H1Semi: return std::sqrt(semisq());
        case NormKind::H1: return std::sqrt(l2sq() + semisq());
    }
    return 0.0;
}

/// Dirichlet energy (1/2)∫|f'|^2 of the interpolant; shares cells with H1Semi.
inline double dirichlet_energy(const GridFunction& f) {
    const double s = norm(f, NormKind::H1Semi);
    return 0.5 * s * s;
}

} // namespace qwell
