#pragma once

namespace ctl {

/// Fundamental constants in SI units (CODATA 2018). Fixed at compile time;
/// nothing in the library mutates or rescales them.
struct physical_constants {
    double hbar; ///< reduced Planck constant [J s]
    double c;    ///< speed of light in vacuum [m/s]
};

inline constexpr physical_constants codata{1.054571817e-34, 299792458.0};

} // namespace ctl
