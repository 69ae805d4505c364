#pragma once

#include <cmath>
#include <numbers>

#include "ctl/constants.hpp"
#include "ctl/errors.hpp"
#include "ctl/material.hpp"
#include "ctl/quadrature.hpp"

namespace ctl {

enum class polarization { te, tm };

namespace detail {

/// Per-(K, xi) reflection data for one mirror, on the imaginary frequency axis.
/// kappa   = sqrt(K^2 + (xi/c)^2)        vacuum decay constant
/// kappa_m = sqrt(kappa^2 + k_p^2)       decay constant inside the plasma
/// einv    = 1/eps(i xi), written so the xi -> 0 limit (eps -> inf) is exact.
///
/// Sign convention: r_te -> -1 and r_tm -> +1 in the perfect-reflector limit.
/// Only r^2 enters the plane-plane energy, but the corrugation response reuses
/// these amplitudes where the relative sign between polarizations matters.
struct reflection_state {
    double kappa;
    double r_te, r_tm;
    double one_minus_r2_te, one_minus_r2_tm; // computed cancellation-free
};

inline reflection_state make_reflection_state(double K, double xi_over_c, double k_p) {
    reflection_state s{};
    const double y2 = xi_over_c * xi_over_c;
    s.kappa = std::sqrt(K * K + y2);
    const double kp2 = k_p * k_p;
    const double kappa_m = std::sqrt(s.kappa * s.kappa + kp2);
    const double einv = y2 / (y2 + kp2);
    s.r_te = (s.kappa - kappa_m) / (s.kappa + kappa_m);
    s.r_tm = (s.kappa - einv * kappa_m) / (s.kappa + einv * kappa_m);
    const double den_te = s.kappa + kappa_m;
    const double den_tm = s.kappa + einv * kappa_m;
    s.one_minus_r2_te = 4.0 * s.kappa * kappa_m / (den_te * den_te);
    s.one_minus_r2_tm = 4.0 * s.kappa * einv * kappa_m / (den_tm * den_tm);
    return s;
}

inline reflection_state make_reflection_state_ideal(double K, double xi_over_c) {
    reflection_state s{};
    s.kappa = std::sqrt(K * K + xi_over_c * xi_over_c);
    s.r_te = -1.0;
    s.r_tm = 1.0;
    s.one_minus_r2_te = 0.0;
    s.one_minus_r2_tm = 0.0;
    return s;
}

/// 1 - r^2 exp(-2 kappa L), stable when both factors are within 1e-16 of 1.
inline double round_trip_denominator(double one_minus_r2, double kappa, double L) {
    const double x = 2.0 * kappa * L;
    const double e = std::exp(-x);
    return -std::expm1(-x) + e * one_minus_r2;
}

} // namespace detail

/// Fresnel reflection amplitude at imaginary frequency xi for transverse
/// wavenumber K. Real-valued; |r| <= 1.
inline double fresnel_reflection(double K, double xi, const mirror_material& mat,
                                 polarization pol) {
    if (K < 0.0 || xi < 0.0) throw domain_error("fresnel_reflection: K and xi must be >= 0");
    if (K == 0.0 && xi == 0.0)
        throw domain_error("fresnel_reflection: K = xi = 0 is degenerate");
    if (is_ideal(mat)) return pol == polarization::te ? -1.0 : 1.0;

    const double k_p = 2.0 * std::numbers::pi / std::get<plasma_material>(mat).lambda_p;
    const auto s = detail::make_reflection_state(K, xi / codata.c, k_p);
    return pol == polarization::te ? s.r_te : s.r_tm;
}

namespace detail {

/// Shared 2D quadrature over (xi/c, K) of a per-polarization integrand
/// g(kappa, r^2 e^{-2 kappa L} pieces). Used by e_pp and its L-derivatives.
template <typename PerPoint>
double lifshitz_integral(const plane_geometry& geom, const mirror_material& mat,
                         const quadrature_spec& spec, PerPoint&& per_point) {
    const double L = geom.separation;
    const double scale = 1.0 / (2.0 * L);
    const bool ideal = is_ideal(mat);
    const double k_p =
        ideal ? 0.0 : 2.0 * std::numbers::pi / std::get<plasma_material>(mat).lambda_p;

    quadrature_spec inner = spec;
    inner.relative_tolerance = spec.relative_tolerance / 4.0;

    auto outer = [&](double y) {
        auto f = [&](double K) {
            const auto s = ideal ? make_reflection_state_ideal(K, y)
                                 : make_reflection_state(K, y, k_p);
            return K * per_point(s, L);
        };
        return integrate_semi_infinite(f, scale, inner).value;
    };
    return integrate_semi_infinite(outer, scale, spec).value * codata.c;
}

} // namespace detail

/// Plane-plane Casimir energy per unit area e_pp(L) [J/m^2], zero temperature.
inline double epp(const plane_geometry& geom, const mirror_material& mat,
                  const quadrature_spec& spec = {}) {
    const double pref = codata.hbar / (4.0 * std::numbers::pi * std::numbers::pi);
    const double integral = detail::lifshitz_integral(
        geom, mat, spec, [](const detail::reflection_state& s, double L) {
            const double e2 = std::exp(-2.0 * s.kappa * L);
            // log1p keeps the weak-coupling tail accurate
            return std::log1p(-s.r_te * s.r_te * e2) + std::log1p(-s.r_tm * s.r_tm * e2);
        });
    const double value = pref * integral;
    if (!(value < 0.0)) throw domain_error("epp: computed energy is not negative");
    return value;
}

/// Second distance-derivative e_pp''(L) [J/m^4], by differentiating the
/// Lifshitz integrand analytically (finite differences of epp stay in the
/// test suite as an oracle).
inline double epp_second_derivative(const plane_geometry& geom, const mirror_material& mat,
                                    const quadrature_spec& spec = {}) {
    const double pref = -codata.hbar / (std::numbers::pi * std::numbers::pi);
    const double integral = detail::lifshitz_integral(
        geom, mat, spec, [](const detail::reflection_state& s, double L) {
            // d^2/dL^2 ln(1 - r^2 e^{-2 kappa L}) = -4 kappa^2 u/(1-u)^2
            double sum = 0.0;
            const double e2 = std::exp(-2.0 * s.kappa * L);
            {
                const double u = s.r_te * s.r_te * e2;
                const double d = detail::round_trip_denominator(s.one_minus_r2_te, s.kappa, L);
                sum += u / (d * d);
            }
            {
                const double u = s.r_tm * s.r_tm * e2;
                const double d = detail::round_trip_denominator(s.one_minus_r2_tm, s.kappa, L);
                sum += u / (d * d);
            }
            return s.kappa * s.kappa * sum;
        });
    const double value = pref * integral;
    if (!(value < 0.0))
        throw domain_error("epp_second_derivative: curvature must be negative");
    return value;
}

/// Closed forms for the perfect-reflector plates; used as oracles and by the
/// asymptotic response backends.
inline double epp_ideal_closed_form(double L) {
    const double pi = std::numbers::pi;
    return -pi * pi * codata.hbar * codata.c / (720.0 * L * L * L);
}

inline double epp_second_derivative_ideal_closed_form(double L) {
    const double pi = std::numbers::pi;
    return -pi * pi * codata.hbar * codata.c / (60.0 * L * L * L * L * L);
}

} // namespace ctl
