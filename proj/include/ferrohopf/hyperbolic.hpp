#pragma once

// Overflow-free hyperbolic building blocks for x > 0.
//
// Everything is expressed through t = exp(-2x) and expm1(-2x), so arguments in
// the thousands (deep-fluid limit of the Hopf locus) stay finite and the small-x
// regime keeps full relative precision.

#include <cmath>

namespace ferrohopf::hyp {

inline constexpr double series_cutoff = 1e-4;

/// x coth x, equal to 1 at x = 0.
inline double xcoth(double x) {
    x = std::abs(x);
    if (x < series_cutoff) {
        const double x2 = x * x;
        return 1.0 + x2 / 3.0 - x2 * x2 / 45.0;
    }
    const double t = std::exp(-2.0 * x);
    return -x * (1.0 + t) / std::expm1(-2.0 * x);
}

/// coth x for x > 0.
inline double coth(double x) {
    const double t = std::exp(-2.0 * x);
    return -(1.0 + t) / std::expm1(-2.0 * x);
}

/// x^2 cosech^2 x, equal to 1 at x = 0.
inline double x2csch2(double x) {
    x = std::abs(x);
    if (x < series_cutoff) {
        const double x2 = x * x;
        return 1.0 - x2 / 3.0 + x2 * x2 / 15.0;
    }
    const double t = std::exp(-2.0 * x);
    const double d = std::expm1(-2.0 * x);
    return 4.0 * x * x * t / (d * d);
}

/// cosech^2 x for x > 0.
inline double csch2(double x) {
    const double t = std::exp(-2.0 * x);
    const double d = std::expm1(-2.0 * x);
    return 4.0 * t / (d * d);
}

/// sech x, evaluated without forming cosh for large x.
inline double sech(double x) {
    x = std::abs(x);
    const double e = std::exp(-x);
    return 2.0 * e / (1.0 + e * e);
}

/// d/dx (x coth x) = coth x - x cosech^2 x.
inline double dxcoth(double x) {
    const double ax = std::abs(x);
    if (ax < 0.05) {
        const double x2 = x * x;
        // sum of 2n c_n x^(2n-1) with c_n the Laurent coefficients of coth
        return x * (2.0 / 3.0 + x2 * (-4.0 / 45.0 + x2 * (12.0 / 945.0 +
                    x2 * (-8.0 / 4725.0 + x2 * (20.0 / 93555.0)))));
    }
    const double t = std::exp(-2.0 * ax);
    const double d = std::expm1(-2.0 * ax);
    // coth x - x csch^2 x = [(1 - t^2) - 4 x t] / (1 - t)^2
    const double r = ((1.0 - t * t) - 4.0 * ax * t) / (d * d);
    return x < 0 ? -r : r;
}

}  // namespace ferrohopf::hyp
