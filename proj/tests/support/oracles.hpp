#pragma once

// Test-only oracles, independent of the library's implementation paths.

#include <cmath>
#include <functional>
#include <random>
#include <vector>

namespace oracles {

/// First positive zero of Ai(-x) by RK4 shooting on z'' = -t z with the
/// series values Ai(0), Ai'(0), refined by bisection on the integrated
/// solution. Independent of any eigensolver.
inline double airy_ground_energy() {
    const double ai0 = 0.35502805388781723926;
    const double aip0 = -0.25881940379280679840;
    // z(t) = Ai(-t): z'' = -t z, z(0) = Ai(0), z'(0) = -Ai'(0)
    auto integrate_to = [&](double T) {
        double t = 0.0, z = ai0, w = -aip0;
        const int steps = 20000;
        const double h = T / steps;
        for (int i = 0; i < steps; ++i) {
            auto f = [](double tt, double zz) { return -tt * zz; };
            const double k1z = w, k1w = f(t, z);
            const double k2z = w + 0.5 * h * k1w, k2w = f(t + 0.5 * h, z + 0.5 * h * k1z);
            const double k3z = w + 0.5 * h * k2w, k3w = f(t + 0.5 * h, z + 0.5 * h * k2z);
            const double k4z = w + h * k3w, k4w = f(t + h, z + h * k3z);
            z += h / 6.0 * (k1z + 2.0 * k2z + 2.0 * k3z + k4z);
            w += h / 6.0 * (k1w + 2.0 * k2w + 2.0 * k3w + k4w);
            t += h;
        }
        return z;
    };
    double lo = 2.0, hi = 2.6;  // Ai(-2) > 0, Ai(-2.6) < 0
    for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (integrate_to(mid) > 0.0) lo = mid;
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

/// Li2(z) for |z| <= 0.62 by the defining series.
inline double dilog_series(double z) {
    double s = 0.0, zk = z;
    for (int k = 1; k <= 400; ++k) {
        const double term = zk / (static_cast<double>(k) * k);
        s += term;
        if (std::abs(term) < 1e-18) break;
        zk *= z;
    }
    return s;
}

/// Li2(-y) for y > 0 via series / Landen transform / inversion.
inline double dilog_of_negative(double y) {
    constexpr double pi = 3.14159265358979323846;
    if (y <= 0.5) return dilog_series(-y);
    if (y <= 2.0) {
        // Landen: Li2(z) = -Li2(z/(z-1)) - ln^2(1-z)/2 with z = -y
        const double w = y / (1.0 + y);  // in (1/3, 2/3]
        const double l = std::log1p(y);
        return -dilog_series(w) - 0.5 * l * l;
    }
    // inversion: Li2(-y) = -pi^2/6 - ln^2(y)/2 - Li2(-1/y)
    const double l = std::log(y);
    return -pi * pi / 6.0 - 0.5 * l * l - dilog_of_negative(1.0 / y);
}

/// ∫_x^∞ log(1+e^{-u}) du = -Li2(-e^{-x}), closed dilogarithm form.
inline double fermi_tail_series(double x) {
    constexpr double pi = 3.14159265358979323846;
    if (x < -36.0) {
        // avoid exp(-x) blowup: -Li2(-e^{-x}) = pi^2/6 + x^2/2 + Li2(-e^{x})
        return pi * pi / 6.0 + 0.5 * x * x + dilog_of_negative(std::exp(x));
    }
    return -dilog_of_negative(std::exp(-x));
}

/// Composite Simpson reference quadrature for smooth closed-form checks.
inline double simpson(const std::function<double(double)>& f, double a, double b, int panels) {
    double s = f(a) + f(b);
    const double h = (b - a) / (2 * panels);
    for (int i = 1; i < 2 * panels; ++i) s += f(a + i * h) * ((i % 2) ? 4.0 : 2.0);
    return s * h / 3.0;
}

inline std::mt19937 seeded_rng(unsigned seed) { return std::mt19937(seed); }

} // namespace oracles
