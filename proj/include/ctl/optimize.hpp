#pragma once

#include <cmath>
#include <concepts>

#include "ctl/errors.hpp"

namespace ctl {

enum class extremum_kind { minimum, maximum };

struct extremum {
    double location;
    double value;
};

/// Golden-section search for the single extremum of f inside [lo, hi].
/// `tol` is relative to the bracket width. Throws bracketing_error when the
/// search collapses onto an endpoint, i.e. f is monotone over the bracket.
template <typename F>
    requires requires(F f, double x) { { f(x) } -> std::convertible_to<double>; }
extremum find_extremum(F&& f, double lo, double hi, extremum_kind kind, double tol = 1e-10) {
    if (!(lo < hi)) throw bracketing_error("find_extremum: empty bracket");
    const double sign = (kind == extremum_kind::maximum) ? -1.0 : 1.0;
    auto g = [&](double x) { return sign * f(x); };

    constexpr double invphi = 0.6180339887498949;
    const double width = hi - lo;
    double a = lo, b = hi;
    double x1 = b - invphi * (b - a);
    double x2 = a + invphi * (b - a);
    double g1 = g(x1), g2 = g(x2);

    while (b - a > tol * width) {
        if (g1 < g2) {
            b = x2;
            x2 = x1;
            g2 = g1;
            x1 = b - invphi * (b - a);
            g1 = g(x1);
        } else {
            a = x1;
            x1 = x2;
            g1 = g2;
            x2 = a + invphi * (b - a);
            g2 = g(x2);
        }
    }

    const double xbest = 0.5 * (a + b);
    const double gbest = g(xbest);

    // a monotone f funnels the search into an endpoint and ends up above it
    if (!(gbest <= g(lo) && gbest <= g(hi)))
        throw bracketing_error("find_extremum: no interior extremum in bracket");

    return {xbest, sign * gbest};
}

} // namespace ctl
