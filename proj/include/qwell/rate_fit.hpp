#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "qwell/errors.hpp"

namespace qwell {

/// Result of fitting err(eps) = C * exp(-c / eps^k), k = 1 or 2.
struct RateFit {
    double rate_c = 0.0;        // decay constant c
    double log_prefactor = 0.0; // ln C
    double r_squared = 0.0;
    int model_exponent = 1;     // k
};

/// Ordinary least squares on (1/eps^k, ln err). Slope is -c.
inline RateFit fit_exponential_rate(const std::vector<std::pair<double, double>>& samples,
                                    int model_exponent) {
    if (model_exponent != 1 && model_exponent != 2)
        throw InvalidArgument("fit_exponential_rate: model_exponent must be 1 or 2");
    if (samples.size() < 3)
        throw InvalidArgument("fit_exponential_rate: need at least 3 samples");
    std::vector<double> x, y;
    x.reserve(samples.size());
    y.reserve(samples.size());
    for (const auto& [eps, err] : samples) {
        if (!(eps > 0.0) || !std::isfinite(eps))
            throw InvalidArgument("fit_exponential_rate: epsilon must be positive");
        if (!(err > 0.0) || !std::isfinite(err))
            throw InvalidArgument("fit_exponential_rate: err must be positive");
        const double xi = (model_exponent == 1) ? 1.0 / eps : 1.0 / (eps * eps);
        for (double seen : x)
            if (seen == xi) throw InvalidArgument("fit_exponential_rate: epsilons must be distinct");
        x.push_back(xi);
        y.push_back(std::log(err));
    }
    const auto m = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) { mx += x[i]; my += y[i]; }
    mx /= m; my /= m;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx, dy = y[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    const double slope = sxy / sxx;
    RateFit fit;
    fit.model_exponent = model_exponent;
    fit.rate_c = -slope;
    fit.log_prefactor = my - slope * mx;
    // flat data fits its own mean exactly
    fit.r_squared = (syy > 0.0) ? (sxy * sxy) / (sxx * syy) : 1.0;
    return fit;
}

} // namespace qwell
