#pragma once

#include <cmath>
#include <numbers>

namespace cavnet {

inline constexpr double speed_of_light = 299792458.0;  // m/s
inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

// Angular frequency (rad/s) of a vacuum wavelength given in nm.
inline double omega_from_wavelength_nm(double lambda_nm) {
    return two_pi * speed_of_light / (lambda_nm * 1e-9);
}

inline double wavelength_nm_from_omega(double omega) {
    return two_pi * speed_of_light / omega * 1e9;
}

// Rates and detunings are carried internally as angular frequencies.
// All user-facing frequency values follow the value/2pi convention.
inline double rad_per_s_from_ghz(double f_ghz) { return two_pi * f_ghz * 1e9; }
inline double ghz_from_rad_per_s(double w) { return w / two_pi / 1e9; }

}  // namespace cavnet
