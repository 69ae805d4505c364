#pragma once

#include <algorithm>
#include <cmath>
#include <iostream>
#include <mutex>
#include <numbers>

#include "ctl/errors.hpp"
#include "ctl/optimize.hpp"
#include "ctl/response.hpp"
#include "ctl/special.hpp"

namespace ctl {

/// Sinusoidal corrugations on both plates: h_j = a_j cos(k x_j - k b_j) with a
/// common wavenumber k = 2 pi / lambda_c and lateral offsets b_j.
struct corrugation_pair {
    corrugation_pair(double a1_m, double a2_m, double k_1_per_m, double b1_m = 0.0,
                     double b2_m = 0.0)
        : a1(a1_m), a2(a2_m), k(k_1_per_m), b1(b1_m), b2(b2_m) {
        if (!(a1 > 0.0) || !(a2 > 0.0)) throw domain_error("corrugation_pair: amplitudes must be > 0");
        if (!(k > 0.0)) throw domain_error("corrugation_pair: k must be > 0");
    }
    double a1, a2; ///< amplitudes [m]
    double k;      ///< corrugation wavenumber [1/m]
    double b1, b2; ///< lateral offsets [m]

    double lambda_c() const { return 2.0 * std::numbers::pi / k; }
};

/// Rectangular corrugated section.
struct plate_extent {
    plate_extent(double lx_m, double ly_m) : lx(lx_m), ly(ly_m) {
        if (!(lx > 0.0) || !(ly > 0.0)) throw domain_error("plate_extent: dimensions must be > 0");
    }
    double lx, ly; ///< [m]
};

/// Corrugation misalignment angle. Unrestricted; the energy respects
/// theta -> -theta and theta -> pi - theta.
struct orientation {
    double theta = 0.0; ///< [rad]
};

/// Torque per unit plate area with the angle it occurs at.
/// Sign convention: positive torque restores the plate toward theta = 0 from
/// positive theta (it equals +d(dE/A)/dtheta and is odd in theta).
struct torque_result {
    double torque_per_area; ///< [N/m]
    double theta_at;        ///< [rad]
    response_backend backend;
};

/// Perturbative amplitude guard: a_1, a_2 must stay well below every other
/// length in the problem. The default fraction 0.3 reads "much less than" as
/// "below 30%"; enforce=false downgrades the rejection to a warning.
inline void validate_perturbative(const corrugation_pair& pair, const plane_geometry& geom,
                                  const mirror_material& mat, double guard_fraction = 0.3,
                                  bool enforce = true) {
    double bound = std::min(geom.separation, pair.lambda_c());
    if (!is_ideal(mat)) bound = std::min(bound, std::get<plasma_material>(mat).lambda_p);
    bound *= guard_fraction;
    if (pair.a1 <= bound && pair.a2 <= bound) return;
    if (enforce)
        throw regime_error("corrugation amplitudes violate the perturbative guard");
    std::cerr << "ctl: warning: corrugation amplitudes exceed " << guard_fraction
              << " of the smallest length scale; results are outside the guaranteed "
                 "perturbative regime\n";
}

namespace detail {

inline void check_wavenumber_match(const corrugation_pair& pair, const response_sample& G) {
    const double scale = std::max(std::abs(pair.k), std::abs(G.k));
    if (std::abs(pair.k - G.k) > 1e-12 * scale)
        throw consistency_error("energy: response sample was evaluated at a different k");
}

inline bool long_line_regime(const corrugation_pair& pair, const plate_extent& extent,
                             double theta) {
    return pair.k * extent.ly >= 20.0 && std::abs(theta) <= 0.3;
}

inline void long_line_fallback_notice() {
    static std::once_flag flag;
    std::call_once(flag, [] {
        std::cerr << "ctl: note: outside the long-corrugation-line regime; "
                     "using the general finite-plate energy formula\n";
    });
}

/// Location and value of the first interior minimum of d sinc/dx on (0, pi).
/// This single number carries the paper-level constants: |value|/4 = 0.109
/// and location/pi = 0.66 of the torque formulas. Computed, not hard-coded.
inline const extremum& sinc_deriv_minimum() {
    static const extremum ext =
        find_extremum([](double x) { return sinc_deriv(x); }, 0.05, std::numbers::pi,
                      extremum_kind::minimum, 1e-12);
    return ext;
}

} // namespace detail

/// Energy correction per unit area for the general rectangular plate,
/// delta E / (Lx Ly) [J/m^2]:
///   (a1 a2/2) G(k) cos(k b) sinc(k Ly sin(theta)/2)
///     * sum_{eps=+-} sinc(k Lx (1 + eps cos(theta))/2),   b = b2 cos(theta) - b1.
inline double energy_general(const corrugation_pair& pair, const plate_extent& extent,
                             const orientation& orient, const response_sample& G) {
    detail::check_wavenumber_match(pair, G);
    const double k = pair.k;
    const double ct = std::cos(orient.theta);
    const double st = std::sin(orient.theta);
    const double b = pair.b2 * ct - pair.b1;
    const double envelope = sinc(0.5 * k * extent.ly * st) *
                            (sinc(0.5 * k * extent.lx * (1.0 + ct)) +
                             sinc(0.5 * k * extent.lx * (1.0 - ct)));
    return 0.5 * pair.a1 * pair.a2 * G.G * std::cos(k * b) * envelope;
}

/// Long-corrugation-line limit (k Ly >= 20, |theta| <= 0.3 rad):
///   (a1 a2/2) G(k) cos(k b) sinc(k Ly theta / 2).
/// Outside the regime it falls back to energy_general with a one-time notice.
inline double energy_long_lines(const corrugation_pair& pair, const plate_extent& extent,
                                const orientation& orient, const response_sample& G) {
    detail::check_wavenumber_match(pair, G);
    if (!detail::long_line_regime(pair, extent, orient.theta)) {
        detail::long_line_fallback_notice();
        return energy_general(pair, extent, orient, G);
    }
    const double k = pair.k;
    const double b = pair.b2 * std::cos(orient.theta) - pair.b1;
    return 0.5 * pair.a1 * pair.a2 * G.G * std::cos(k * b) *
           sinc(0.5 * k * extent.ly * orient.theta);
}

/// Restoring torque per unit area at the given orientation, from the analytic
/// theta-derivative of the long-line energy at fixed b. Outside the long-line
/// regime the derivative is taken numerically on energy_general.
inline torque_result torque(const corrugation_pair& pair, const plate_extent& extent,
                            const orientation& orient, const response_sample& G) {
    detail::check_wavenumber_match(pair, G);
    const double k = pair.k;
    if (detail::long_line_regime(pair, extent, orient.theta)) {
        const double b = pair.b2 * std::cos(orient.theta) - pair.b1;
        const double x = 0.5 * k * extent.ly * orient.theta;
        const double value = 0.5 * pair.a1 * pair.a2 * G.G * std::cos(k * b) *
                             0.5 * k * extent.ly * sinc_deriv(x);
        return {value, orient.theta, G.backend};
    }
    detail::long_line_fallback_notice();
    const double h = 1e-6 * std::max(std::abs(orient.theta), pair.lambda_c() / extent.ly);
    const double ep = energy_general(pair, extent, {orient.theta + h}, G);
    const double em = energy_general(pair, extent, {orient.theta - h}, G);
    return {(ep - em) / (2.0 * h), orient.theta, G.backend};
}

/// Maximal restoring torque per unit area in the long-line regime. The angle
/// of the maximum and the prefactor both come from the computed extremum of
/// d sinc/dx (numerically 0.66 lambda_c/Ly and 0.109 a1 a2 k |G| Ly).
inline torque_result max_torque(const corrugation_pair& pair, const plate_extent& extent,
                                const plane_geometry& geom, const mirror_material& mat,
                                response_backend backend,
                                const quadrature_spec& spec = response_quadrature_defaults()) {
    const response_sample G = g_response(pair.k, geom, mat, backend, spec);
    const auto& ext = detail::sinc_deriv_minimum();
    const double theta_at = 2.0 * ext.location / (pair.k * extent.ly);
    const double value = 0.5 * pair.a1 * pair.a2 * std::abs(G.G) * 0.5 * pair.k * extent.ly *
                         std::abs(ext.value);
    return {value, theta_at, G.backend};
}

/// PFA comparison torque: max_torque evaluated on the PFA backend, i.e. with
/// G replaced by e_pp''(L).
inline torque_result pfa_torque(const corrugation_pair& pair, const plate_extent& extent,
                                const plane_geometry& geom, const mirror_material& mat,
                                const quadrature_spec& spec = {}) {
    return max_torque(pair, extent, geom, mat, response_backend::pfa, spec);
}

/// Lateral force per unit area along the k_1 direction, -d(dE/A)/db of the
/// selected energy formula. Negative values for 0 < b < lambda_c/2 pull the
/// plate back toward b = 0.
inline double lateral_force(const corrugation_pair& pair, const plate_extent& extent,
                            const orientation& orient, const response_sample& G) {
    detail::check_wavenumber_match(pair, G);
    const double k = pair.k;
    const double ct = std::cos(orient.theta);
    const double b = pair.b2 * ct - pair.b1;
    double envelope;
    if (detail::long_line_regime(pair, extent, orient.theta)) {
        envelope = sinc(0.5 * k * extent.ly * orient.theta);
    } else {
        detail::long_line_fallback_notice();
        envelope = sinc(0.5 * k * extent.ly * std::sin(orient.theta)) *
                   (sinc(0.5 * k * extent.lx * (1.0 + ct)) +
                    sinc(0.5 * k * extent.lx * (1.0 - ct)));
    }
    return 0.5 * pair.a1 * pair.a2 * G.G * k * std::sin(k * b) * envelope;
}

/// Misalignment angle where the aligned configuration stops being restoring:
/// the first zero of sinc(k Ly theta / 2), i.e. lambda_c / Ly.
inline double stability_threshold(const corrugation_pair& pair, const plate_extent& extent) {
    return 2.0 * std::numbers::pi / (pair.k * extent.ly);
}

/// Corrugation wavenumber maximizing k |G(k)| over (0, k_max], the quantity
/// the maximal torque is proportional to. Only the scattering backends have
/// an interior optimum; the PFA objective grows linearly in k forever.
inline double optimize_corrugation_wavelength(const plane_geometry& geom,
                                              const mirror_material& mat,
                                              response_backend backend,
                                              const quadrature_spec& spec = response_quadrature_defaults(),
                                              double k_max = 0.0) {
    if (backend != response_backend::scattering_plasma &&
        backend != response_backend::scattering_ideal)
        throw regime_error(
            "optimize_corrugation_wavelength: needs a scattering backend (the PFA torque "
            "grows linearly in k and has no optimum)");
    const double L = geom.separation;
    if (k_max <= 0.0) k_max = 12.0 / L;
    auto objective = [&](double k) { return k * std::abs(g_scattering(k, geom, mat, spec).G); };
    const extremum best =
        find_extremum(objective, 0.2 / L, k_max, extremum_kind::maximum, 1e-4);
    if (best.value == 0.0) throw convergence_error("optimize: flat (underflowed) objective", 0.0, 0.0);
    return best.location;
}

} // namespace ctl
