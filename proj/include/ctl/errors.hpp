#pragma once

#include <stdexcept>
#include <string>

namespace ctl {

/// Base class for all library errors.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Invalid value fed to a numerical routine (NaN integrand, degenerate input).
struct domain_error : error {
    using error::error;
};

/// Adaptive quadrature exhausted its subdivision budget. Carries the best
/// estimate so callers that can live with the accuracy may still use it.
struct convergence_error : error {
    convergence_error(const std::string& what, double best, double err)
        : error(what), best_estimate(best), error_estimate(err) {}
    double best_estimate;
    double error_estimate;
};

/// The bracket handed to an extremum/root search does not contain one.
struct bracketing_error : error {
    using error::error;
};

/// Malformed or inconsistent run configuration.
struct config_error : error {
    using error::error;
};

/// Input outside a validity regime that is enforced rather than warned about
/// (perturbative amplitude guard, backend restrictions).
struct regime_error : error {
    using error::error;
};

/// Two quantities that must refer to the same wavenumber/geometry do not.
struct consistency_error : error {
    using error::error;
};

} // namespace ctl
