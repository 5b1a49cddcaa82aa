#pragma once

#include <complex>
#include <random>

#include "cavnet/device.hpp"
#include "cavnet/hybridization.hpp"

namespace cavnet::testing {

// Device parameter set used across the hybridization and fitting tests:
// two equal-Q cavities behind a mirror with the stationary cavity nearly
// resonant with an embedded emitter.
inline DeviceConfig reference_device() {
    DeviceConfig cfg;
    const double lambda_c1 = 1325.9132;
    const double q_e = 10165.0;
    const double w1 = omega_from_wavelength_nm(lambda_c1);
    cfg.cavities.resize(2);
    cfg.cavities[0].label = "C1";
    cfg.cavities[0].resonance_wavelength_nm = lambda_c1;
    cfg.cavities[0].kappa_e = 0.5 * w1 / q_e;
    cfg.cavities[0].kappa_i = w1 / 35460.0;
    cfg.cavities[1].label = "C4";
    cfg.cavities[1].resonance_wavelength_nm = 1325.880;
    cfg.cavities[1].kappa_e = 0.5 * w1 / q_e;
    cfg.cavities[1].kappa_i = w1 / 34441.0;
    cfg.phi1 = 0.78 * pi;
    cfg.phi2 = 1.44 * pi;
    cfg.probe_wavelength_nm = 1325.880;
    cfg.probe_amplitude = 1.0;
    cfg.validate();
    return cfg;
}

inline EmitterParams reference_emitter(double probe_wavelength_nm = 1325.880) {
    const double w_e = omega_from_wavelength_nm(1325.880);
    const double w_p = omega_from_wavelength_nm(probe_wavelength_nm);
    return EmitterParams::from_lifetime(rad_per_s_from_ghz(0.115), w_e - w_p, 940e-9);
}

struct Rng {
    std::mt19937_64 engine;
    explicit Rng(std::uint64_t seed) : engine(seed) {}
    double uniform(double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(engine);
    }
    std::complex<double> complex_in_disk(double radius) {
        while (true) {
            const double re = uniform(-radius, radius);
            const double im = uniform(-radius, radius);
            if (re * re + im * im <= radius * radius) return {re, im};
        }
    }
    double gaussian(double sigma) {
        return std::normal_distribution<double>(0.0, sigma)(engine);
    }
};

}  // namespace cavnet::testing
