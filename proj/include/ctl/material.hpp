#pragma once

#include <variant>

#include "ctl/errors.hpp"

namespace ctl {

/// Metal described by the plasma model, eps(i xi) = 1 + (2 pi c / lambda_p)^2 / xi^2.
struct plasma_material {
    explicit plasma_material(double lambda_p_m) : lambda_p(lambda_p_m) {
        if (!(lambda_p > 0.0)) throw domain_error("plasma_material: lambda_p must be > 0");
    }
    double lambda_p; ///< plasma wavelength [m]
};

/// Perfect reflector. A separate type, not lambda_p = 0: the two limits enter
/// several formulas through different branches.
struct ideal_mirror {};

using mirror_material = std::variant<plasma_material, ideal_mirror>;

inline bool is_ideal(const mirror_material& m) {
    return std::holds_alternative<ideal_mirror>(m);
}

/// Mean separation between the two reference planes.
struct plane_geometry {
    explicit plane_geometry(double separation_m) : separation(separation_m) {
        if (!(separation > 0.0)) throw domain_error("plane_geometry: separation must be > 0");
    }
    double separation; ///< [m]
};

} // namespace ctl
