#pragma once

#include <cmath>

#include "qwell/errors.hpp"

namespace qwell {

/// Dimensional inputs of the confinement problem (SI units).
struct PhysicalParams {
    double hbar = 1.054571817e-34;      // J s
    double mass = 9.1093837015e-31;     // kg
    double length_L = 1e-8;             // m
    double temperature_T = 300.0;       // K
    double surface_density_Ns = 1e16;   // m^-2
    double eps0 = 8.8541878128e-12;     // F/m
    double eps_r = 11.7;
    double charge_q = 1.602176634e-19;  // C
    double kB = 1.380649e-23;           // J/K
};

struct EpsilonScaling {
    double epsilon = 0.0;
    /// hbar^2 / (2 m L^2 kB T); equal to 1 when the thermal normalization is
    /// exactly satisfied, a warning (not an error) when far from it.
    double thermal_consistency = 0.0;
    bool thermal_warning = false;
};

inline double debye_length(const PhysicalParams& p) {
    const double N = p.surface_density_Ns / p.length_L;  // average volume density
    return std::sqrt(p.kB * p.temperature_T * p.eps0 * p.eps_r / (p.charge_q * p.charge_q * N));
}

/// eps^3 = (lambda_D / L)^2, so eps = (lambda_D/L)^{2/3}.
inline EpsilonScaling epsilon_from_physical(const PhysicalParams& p) {
    const double fields[] = {p.hbar, p.mass, p.length_L, p.temperature_T, p.surface_density_Ns,
                             p.eps0, p.eps_r, p.charge_q, p.kB};
    for (double v : fields)
        if (!(v > 0.0) || !std::isfinite(v))
            throw InvalidArgument("epsilon_from_physical: parameters must be positive and finite");
    EpsilonScaling out;
    const double ratio = debye_length(p) / p.length_L;
    out.epsilon = std::pow(ratio, 2.0 / 3.0);
    out.thermal_consistency =
        p.hbar * p.hbar / (2.0 * p.mass * p.length_L * p.length_L * p.kB * p.temperature_T);
    out.thermal_warning = out.thermal_consistency < 0.1 || out.thermal_consistency > 10.0;
    return out;
}

} // namespace qwell
