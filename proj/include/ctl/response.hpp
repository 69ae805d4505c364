#pragma once

#include <cmath>
#include <iostream>
#include <map>
#include <mutex>
#include <numbers>
#include <tuple>

#include "ctl/lifshitz.hpp"
#include "ctl/material.hpp"
#include "ctl/quadrature.hpp"

namespace ctl {

enum class response_backend {
    pfa,
    scattering_plasma,
    scattering_ideal,
    asymptotic_ideal,
    asymptotic_plasma_highk
};

inline const char* to_string(response_backend b) {
    switch (b) {
        case response_backend::pfa: return "pfa";
        case response_backend::scattering_plasma: return "plasma";
        case response_backend::scattering_ideal: return "ideal";
        case response_backend::asymptotic_ideal: return "asym-ideal";
        case response_backend::asymptotic_plasma_highk: return "asym-plasma";
    }
    return "?";
}

/// One (k, G(k)) evaluation, tagged with its provenance.
struct response_sample {
    double k;          ///< corrugation wavenumber [1/m]
    double G;          ///< response value [J/m^4]; <= 0
    response_backend backend;
    double separation; ///< [m]
    bool underflow = false; ///< true when the propagation factor drowned and G is an exact 0
};

namespace detail {

/// Everything the corrugation kernel needs about one leg of the round trip:
/// reflection data at its transverse wavevector plus the first-order
/// non-specular building blocks.
///   t  = 1 + r_te = 2 kappa/(kappa + kappa_m)
///   u  = 1 + r_tm = 2 kappa/(kappa + kappa_m/eps)
struct leg_state {
    double kappa;
    double kappa_m;
    double t, u;
    double d_te, d_tm; // cavity denominators 1/(1 - r^2 e^{-2 kappa L})
};

inline leg_state make_leg(double K2, double y, double k_p, bool ideal, double L) {
    leg_state s{};
    const double y2 = y * y;
    s.kappa = std::sqrt(K2 + y2);
    if (ideal) {
        s.kappa_m = 0.0;
        s.t = 0.0;
        s.u = 0.0;
        const double D = -std::expm1(-2.0 * s.kappa * L);
        s.d_te = 1.0 / D;
        s.d_tm = s.d_te;
        return s;
    }
    const double kp2 = k_p * k_p;
    s.kappa_m = std::sqrt(s.kappa * s.kappa + kp2);
    const double einv = y2 / (y2 + kp2); // 1/eps(i xi), exact at xi = 0
    s.t = 2.0 * s.kappa / (s.kappa + s.kappa_m);
    s.u = 2.0 * s.kappa / (s.kappa + einv * s.kappa_m);
    const double dte = s.kappa + s.kappa_m;
    const double dtm = s.kappa + einv * s.kappa_m;
    const double omr2_te = 4.0 * s.kappa * s.kappa_m / (dte * dte);
    const double omr2_tm = 4.0 * s.kappa * einv * s.kappa_m / (dtm * dtm);
    s.d_te = 1.0 / round_trip_denominator(omr2_te, s.kappa, L);
    s.d_tm = 1.0 / round_trip_denominator(omr2_tm, s.kappa, L);
    return s;
}

/// Second-order crossed corrugation kernel B(K, K - k; i xi), the single place
/// where the first-order non-specular reflection amplitudes live.
///
/// The amplitudes are the first-order perturbative (Rayleigh-Rice) reflection
/// coefficients of a sinusoidally displaced vacuum/metal interface, continued
/// to the imaginary frequency axis, where all four TE/TM entries are real:
///
///   a_te<-te ~ -k_p^2 cos(phi) t t' / (2 kappa)
///   a_tm<-tm ~ +w (einv kappa_m kappa_m' cos(phi) + K.K') u u' / (2 kappa)
///   a_te<->tm ~ +-w y sin(phi) kappa_m t' u / (2 kappa)   (TE/TM mixing)
///
/// with w = 1 - einv = (eps-1)/eps. Assembling one diffraction at each plate
/// with one-way propagators exp(-kappa L) exp(-kappa' L) and closing the
/// specular round trips gives, per polarization pair (p at K, p' at K'),
/// d_p(K) d_p'(K') times the product of the two amplitudes; the upper plate
/// flips the sign of the mixing entries, which makes the mixed contribution
/// add with the same sign as the diagonal ones. At k = 0 the kernel collapses
/// exactly onto the integrand of epp''(L), which acceptance tests pin to 1e-4.
///
/// Returns exp(-(kappa+kappa')L) * B; never negative.
inline double corrugation_kernel(double kx, double ky, double y, double k, double L,
                                 double k_p, bool ideal) {
    const double K2 = kx * kx + ky * ky;
    const double kpx = kx - k;
    const double Kp2 = kpx * kpx + ky * ky;

    const leg_state a = make_leg(K2, y, k_p, ideal, L);
    const leg_state b = make_leg(Kp2, y, k_p, ideal, L);

    const double exponent = (a.kappa + b.kappa) * L;
    if (exponent > 690.0) return 0.0; // propagation factor below 1e-300
    const double prop = std::exp(-exponent);

    const double dot = kx * kpx + ky * ky;     // K . K'
    const double cross2 = ky * ky * k * k;     // |K x K'|^2
    const double KK2 = K2 * Kp2;               // (K K')^2
    const double y2 = y * y;
    const double inv4kk = 1.0 / (4.0 * a.kappa * b.kappa);

    double sum;
    if (ideal) {
        // te-te: 4 kappa kappa' cos^2; tm-tm: 4 (y^2 cos + K K')^2/(kappa kappa');
        // mixing: 4 y^2 sin^2 (kappa'/kappa d_tm d_te' + kappa/kappa' d_te d_tm')
        double cos2 = 0.0, sin2 = 0.0, num_tm = 0.0;
        if (KK2 > 0.0) {
            cos2 = dot * dot / KK2;
            sin2 = cross2 / KK2;
            const double q = (y2 * dot + KK2) / std::sqrt(KK2); // y^2 cos + K K'
            num_tm = q * q;
        } else {
            // K or K' exactly zero: bounded, direction-free forms
            cos2 = 1.0;
            sin2 = 0.0;
            num_tm = y2 * y2;
        }
        const double tee = 4.0 * a.kappa * b.kappa * cos2 * a.d_te * b.d_te;
        const double tmm = 4.0 * num_tm / (a.kappa * b.kappa) * a.d_tm * b.d_tm;
        const double tmix = 4.0 * y2 * sin2 *
                            (b.kappa / a.kappa * a.d_tm * b.d_te +
                             a.kappa / b.kappa * a.d_te * b.d_tm);
        sum = tee + tmm + tmix;
    } else {
        const double kp2 = k_p * k_p;
        const double w = kp2 / (y2 + kp2);       // (eps-1)/eps
        const double einv = y2 / (y2 + kp2);

        double tee, tmm, tmix;
        if (KK2 > 0.0) {
            const double cos2 = dot * dot / KK2;
            const double sin2 = cross2 / KK2;
            tee = kp2 * kp2 * cos2 * (a.t * a.t) * (b.t * b.t) * inv4kk * a.d_te * b.d_te;
            const double q = w * (einv * a.kappa_m * b.kappa_m * dot + KK2) / std::sqrt(KK2);
            tmm = q * q * (a.u * a.u) * (b.u * b.u) * inv4kk * a.d_tm * b.d_tm;
            tmix = w * w * y2 * sin2 * inv4kk *
                   ((b.t * b.t) * (a.kappa_m * a.kappa_m) * (a.u * a.u) * a.d_tm * b.d_te +
                    (a.t * a.t) * (b.kappa_m * b.kappa_m) * (b.u * b.u) * a.d_te * b.d_tm);
        } else {
            tee = kp2 * kp2 * (a.t * a.t) * (b.t * b.t) * inv4kk * a.d_te * b.d_te;
            const double q = w * einv * a.kappa_m * b.kappa_m;
            tmm = q * q * (a.u * a.u) * (b.u * b.u) * inv4kk * a.d_tm * b.d_tm;
            tmix = 0.0;
        }
        sum = tee + tmm + tmix;
    }
    return prop * sum;
}

} // namespace detail

/// Default tolerances for response evaluations (energies keep the tighter
/// quadrature_spec default of 1e-9).
inline quadrature_spec response_quadrature_defaults() {
    quadrature_spec s;
    s.relative_tolerance = 1e-7;
    return s;
}

/// Long-wavelength (PFA) backend: G = e_pp''(L), independent of k.
inline response_sample g_pfa(double k, const plane_geometry& geom, const mirror_material& mat,
                             const quadrature_spec& spec = {}) {
    return {k, epp_second_derivative(geom, mat, spec), response_backend::pfa,
            geom.separation};
}

/// Full scattering-approach response function G(k) [J/m^4].
///
/// Integrates the crossed kernel over imaginary frequency and the transverse
/// plane. The K-plane is folded onto the half plane Kx <= k/2 (the kernel is
/// symmetric under K -> k - K) and onto Ky >= 0, so every inner integrand is
/// smooth and strictly positive.
inline response_sample g_scattering(double k, const plane_geometry& geom,
                                    const mirror_material& mat,
                                    const quadrature_spec& spec_in = response_quadrature_defaults()) {
    if (k < 0.0) throw domain_error("g_scattering: k must be >= 0");
    const double L = geom.separation;
    const bool ideal = is_ideal(mat);
    const double k_p =
        ideal ? 0.0 : 2.0 * std::numbers::pi / std::get<plasma_material>(mat).lambda_p;
    const response_backend tag =
        ideal ? response_backend::scattering_ideal : response_backend::scattering_plasma;

    if (k * L > 690.0) return {k, 0.0, tag, L, true}; // every propagation factor underflows

    quadrature_spec spec = spec_in;
    spec.relative_tolerance = spec_in.relative_tolerance / 2.0;
    quadrature_spec mid = spec_in;
    mid.relative_tolerance = spec_in.relative_tolerance / 4.0;
    quadrature_spec inner = mid;

    const double scale = 1.0 / (2.0 * L);

    auto ky_integral = [&](double y, double kx) {
        auto f = [&](double ky) {
            return detail::corrugation_kernel(kx, ky, y, k, L, k_p, ideal);
        };
        return integrate_semi_infinite(f, scale, inner).value;
    };

    auto kx_integral = [&](double y) {
        double v = 0.0;
        if (k > 0.0) {
            auto f = [&](double kx) { return ky_integral(y, kx); };
            v += integrate_finite(f, 0.0, 0.5 * k, mid).value;
        }
        auto g = [&](double t) { return ky_integral(y, -t); };
        v += integrate_semi_infinite(g, scale, mid).value;
        return v;
    };

    const double pi = std::numbers::pi;
    const double I = integrate_semi_infinite(kx_integral, scale, spec).value;
    const double G = -(codata.hbar * codata.c / (2.0 * pi * pi * pi)) * I;
    return {k, G, tag, L, G == 0.0};
}

/// Perfect-reflector large-kL law: rho(k) = (2/pi^4) (kL)^4 exp(-kL),
/// scaled by the ideal e_pp''(L). Warns outside its regime instead of failing.
inline response_sample g_asymptotic_ideal(double k, const plane_geometry& geom) {
    const double L = geom.separation;
    const double kL = k * L;
    if (kL < 3.0)
        std::cerr << "ctl: note: asymptotic-ideal backend queried at kL = " << kL
                  << " (< 3), outside its regime\n";
    const double pi = std::numbers::pi;
    const double rho = 2.0 / (pi * pi * pi * pi) * kL * kL * kL * kL * std::exp(-kL);
    return {k, rho * epp_second_derivative_ideal_closed_form(L),
            response_backend::asymptotic_ideal, L};
}

/// Plasma large-k law: rho(k) = (5/2) kL exp(-kL), valid for
/// 1/L << 2 pi/lambda_p << k; scaled by the plasma e_pp''(L).
inline response_sample g_asymptotic_plasma_highk(double k, const plane_geometry& geom,
                                                 const plasma_material& mat,
                                                 const quadrature_spec& spec = {}) {
    const double L = geom.separation;
    const double k_p = 2.0 * std::numbers::pi / mat.lambda_p;
    if (k <= k_p)
        std::cerr << "ctl: note: asymptotic-plasma backend queried at k <= 2 pi/lambda_p, "
                     "outside its regime\n";
    const double rho = 2.5 * k * L * std::exp(-k * L);
    return {k, rho * epp_second_derivative(geom, mirror_material{mat}, spec),
            response_backend::asymptotic_plasma_highk, L};
}

/// Evaluate G(k) on the requested backend.
inline response_sample g_response(double k, const plane_geometry& geom,
                                  const mirror_material& mat, response_backend backend,
                                  const quadrature_spec& spec = response_quadrature_defaults()) {
    switch (backend) {
        case response_backend::pfa:
            return g_pfa(k, geom, mat, spec);
        case response_backend::scattering_plasma:
            if (is_ideal(mat))
                throw domain_error("scattering-plasma backend needs a plasma material");
            return g_scattering(k, geom, mat, spec);
        case response_backend::scattering_ideal:
            // the backend choice selects the mirror model
            return g_scattering(k, geom, ideal_mirror{}, spec);
        case response_backend::asymptotic_ideal:
            return g_asymptotic_ideal(k, geom);
        case response_backend::asymptotic_plasma_highk:
            if (is_ideal(mat))
                throw domain_error("asymptotic-plasma backend needs a plasma material");
            return g_asymptotic_plasma_highk(k, geom, std::get<plasma_material>(mat), spec);
    }
    throw domain_error("g_response: unknown backend");
}

/// rho(k) = G(k)/G(0), the PFA discrepancy ratio. On the scattering backends
/// the numerator comes from the k-dependent response integral and the
/// denominator from the independently differentiated Lifshitz integral, so
/// rho(0) = 1 doubles as a cross-check of the two routes.
inline double rho(double k, const plane_geometry& geom, const mirror_material& mat,
                  response_backend backend,
                  const quadrature_spec& spec = response_quadrature_defaults()) {
    const double kL = k * geom.separation;
    const double pi = std::numbers::pi;
    switch (backend) {
        case response_backend::pfa:
            return 1.0;
        case response_backend::asymptotic_ideal:
            return 2.0 / (pi * pi * pi * pi) * kL * kL * kL * kL * std::exp(-kL);
        case response_backend::asymptotic_plasma_highk:
            return 2.5 * kL * std::exp(-kL);
        case response_backend::scattering_plasma:
        case response_backend::scattering_ideal: {
            const mirror_material m =
                backend == response_backend::scattering_ideal ? mirror_material{ideal_mirror{}} : mat;
            const double g0 = epp_second_derivative(geom, m);
            if (g0 == 0.0) throw domain_error("rho: G(0) vanished");
            return g_scattering(k, geom, m, spec).G / g0;
        }
    }
    throw domain_error("rho: unknown backend");
}

/// Memoizes G(k) per (backend, k, L, lambda_p, tolerance) within a sweep.
/// Safe for concurrent use; a cache miss computed twice lands on the same
/// value, so results never depend on evaluation order.
class response_cache {
  public:
    response_sample sample(double k, const plane_geometry& geom, const mirror_material& mat,
                           response_backend backend,
                           const quadrature_spec& spec = response_quadrature_defaults()) {
        const double lp = is_ideal(mat) ? 0.0 : std::get<plasma_material>(mat).lambda_p;
        const key id{backend, k, geom.separation, lp, spec.relative_tolerance};
        {
            std::lock_guard lock(mutex_);
            if (auto it = cache_.find(id); it != cache_.end()) return it->second;
        }
        response_sample s = g_response(k, geom, mat, backend, spec);
        std::lock_guard lock(mutex_);
        cache_.emplace(id, s);
        return s;
    }

    void clear() {
        std::lock_guard lock(mutex_);
        cache_.clear();
    }

  private:
    using key = std::tuple<response_backend, double, double, double, double>;
    std::mutex mutex_;
    std::map<key, response_sample> cache_;
};

} // namespace ctl
