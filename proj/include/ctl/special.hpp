#pragma once

#include <cmath>

namespace ctl {

/// sinc(x) = sin(x)/x with a series branch near zero. The aligned corrugation
/// configuration evaluates this at x = 0, so the 0/0 form must be exact there.
inline double sinc(double x) {
    const double ax = std::abs(x);
    if (ax < 1e-4) {
        const double x2 = x * x;
        return 1.0 - x2 / 6.0 * (1.0 - x2 / 20.0);
    }
    return std::sin(x) / x;
}

/// d/dx sinc(x) = cos(x)/x - sin(x)/x^2; odd function, series branch near zero.
inline double sinc_deriv(double x) {
    const double ax = std::abs(x);
    if (ax < 1e-4) {
        const double x2 = x * x;
        return -x / 3.0 * (1.0 - x2 / 10.0 * (1.0 - x2 / 28.0));
    }
    return (x * std::cos(x) - std::sin(x)) / (x * x);
}

} // namespace ctl
