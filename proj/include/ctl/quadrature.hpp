#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <vector>

#include "ctl/errors.hpp"

namespace ctl {

/// How a semi-infinite integral is folded onto a finite interval.
enum class semi_infinite_map {
    exponential, ///< x = -s ln t; flattens exp(-x/s) tails
    rational     ///< x = s (1-t)/t
};

/// Tolerances and budget for the adaptive integrator. The relative tolerance
/// applies to the accumulated integral, the absolute one to integrands whose
/// value is legitimately ~0.
struct quadrature_spec {
    double relative_tolerance = 1e-9;
    double absolute_tolerance = 0.0;
    int max_subdivisions = 4000;
    semi_infinite_map transform = semi_infinite_map::exponential;
};

struct quadrature_result {
    double value;
    double error; ///< conservative estimate of the absolute error
};

template <typename F>
concept integrand = requires(F f, double x) {
    { f(x) } -> std::convertible_to<double>;
};

namespace detail {

// 15-point Kronrod nodes on [0,1] (symmetric), embedded 7-point Gauss.
// Layout per row: {abscissa, gauss weight, kronrod weight}.
inline constexpr double gk15[8][3] = {
    {0.000000000000000, 0.417959183673469, 0.209482141084728},
    {0.405845151377397, 0.381830050505119, 0.190350578064785},
    {0.741531185599394, 0.279705391489277, 0.140653259715525},
    {0.949107912342759, 0.129484966168870, 0.063092092629979},
    {0.207784955007898, 0.0,               0.204432940075298},
    {0.586087235467691, 0.0,               0.169004726639267},
    {0.864864423359769, 0.0,               0.104790010322250},
    {0.991455371120813, 0.0,               0.022935322010529},
};

struct panel {
    double a, b;
    double value;  // K15 estimate
    double error;  // |K15 - G7| based estimate
};

template <integrand F>
panel eval_panel(F&& f, double a, double b) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);

    const double f0 = f(mid);
    if (std::isnan(f0)) throw domain_error("quadrature: integrand returned NaN");
    double g7 = gk15[0][1] * f0;
    double k15 = gk15[0][2] * f0;
    for (int i = 1; i < 8; ++i) {
        const double dx = half * gk15[i][0];
        const double fp = f(mid + dx);
        const double fm = f(mid - dx);
        if (std::isnan(fp) || std::isnan(fm))
            throw domain_error("quadrature: integrand returned NaN");
        g7 += gk15[i][1] * (fp + fm);
        k15 += gk15[i][2] * (fp + fm);
    }
    g7 *= half;
    k15 *= half;

    // |K15 - G7| grossly overestimates the K15 error for smooth integrands,
    // which keeps the reported global estimate on the conservative side.
    return {a, b, k15, std::abs(k15 - g7)};
}

} // namespace detail

/// Globally adaptive Gauss-Kronrod integration of f over [a, b].
/// Deterministic: identical inputs always take the identical refinement path.
template <integrand F>
quadrature_result integrate_finite(F&& f, double a, double b, const quadrature_spec& spec = {}) {
    if (!(a < b)) return {0.0, 0.0};

    std::vector<detail::panel> panels;
    panels.reserve(64);
    panels.push_back(detail::eval_panel(f, a, b));

    for (int iter = 0;; ++iter) {
        double total = 0.0, err = 0.0;
        for (const auto& p : panels) {
            total += p.value;
            err += p.error;
        }
        const double goal =
            std::max(spec.relative_tolerance * std::abs(total), spec.absolute_tolerance);
        if (err <= goal) return {total, err};
        if (static_cast<int>(panels.size()) >= spec.max_subdivisions)
            throw convergence_error("quadrature: subdivision budget exhausted", total, err);

        // split the worst panel
        std::size_t worst = 0;
        for (std::size_t i = 1; i < panels.size(); ++i)
            if (panels[i].error > panels[worst].error) worst = i;
        const detail::panel bad = panels[worst];
        const double mid = 0.5 * (bad.a + bad.b);
        panels[worst] = detail::eval_panel(f, bad.a, mid);
        panels.push_back(detail::eval_panel(f, mid, bad.b));
    }
}

/// Integral of f over [0, inf) for integrands that decay at least like
/// exp(-x/scale) beyond x ~ scale. The tail is cut where an exp(-x/scale)
/// envelope drops below 1e-18 of its peak, which is beyond double noise for
/// every integrand in this library.
template <integrand F>
quadrature_result integrate_semi_infinite(F&& f, double scale, const quadrature_spec& spec = {}) {
    if (!(scale > 0.0)) throw domain_error("integrate_semi_infinite: scale must be > 0");

    if (spec.transform == semi_infinite_map::exponential) {
        // x = -scale ln t,  dx = scale/t dt,  t in (t_min, 1]
        const double t_min = 1e-18;
        auto g = [&](double t) { return f(-scale * std::log(t)) * scale / t; };
        return integrate_finite(g, t_min, 1.0, spec);
    }
    // rational: x = scale (1-t)/t, dx = scale/t^2 dt; same 1e-18 envelope cutoff
    const double x_max = scale * std::log(1e18);
    const double t_min = scale / (scale + x_max);
    auto g = [&](double t) { return f(scale * (1.0 - t) / t) * scale / (t * t); };
    return integrate_finite(g, t_min, 1.0, spec);
}

} // namespace ctl
