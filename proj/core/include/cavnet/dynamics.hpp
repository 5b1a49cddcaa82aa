#pragma once

#include <string>
#include <vector>

#include "cavnet/device.hpp"

namespace cavnet {

struct degenerate_system_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Steady-state mean amplitudes <a1>, <a2> of the driven two-cavity network.
struct SteadyState {
    Complex a1{0.0, 0.0};
    Complex a2{0.0, 0.0};
};

SteadyState steady_state(const EffectiveParams& p);

// Time trace of the mean amplitudes, integrated with fixed-step RK4. Used as
// an independent check of the closed-form steady state; not a production
// path.
struct Trajectory {
    std::vector<double> t;
    std::vector<Complex> a1;
    std::vector<Complex> a2;
    bool accuracy_warning = false;  // set when dt is too coarse for the rates involved
};

Trajectory evolve(const EffectiveParams& p, double t_final, double dt,
                  Complex a1_0 = 0.0, Complex a2_0 = 0.0);

// Reflection amplitude r = L/alpha for given effective parameters and phases.
Complex reflection_amplitude(const EffectiveParams& p, double theta1, double theta2,
                             Complex alpha, double kappa_e1, double kappa_e2);

// Reflection spectrum over a probe-wavelength grid. detuning is reported
// relative to the device reference wavelength. A grid point whose steady
// state is singular is flagged and reported as NaN instead of aborting the
// sweep.
struct Spectrum {
    std::vector<double> wavelength_nm;
    std::vector<double> detuning;  // rad/s, omega_p - omega_ref
    std::vector<Complex> reflection;
    std::vector<double> power;  // |r|^2
    std::vector<bool> valid;

    std::size_t size() const { return wavelength_nm.size(); }
};

Spectrum reflection(const DeviceConfig& cfg, const std::vector<double>& grid_nm,
                    int threads = 1);

// CSV with columns: wavelength_nm, detuning_GHz, re_r, im_r, reflectance.
void write_spectrum_csv(const Spectrum& spec, const std::string& path);
Spectrum read_spectrum_csv(const std::string& path);

std::vector<double> linspace(double first, double last, int n);

}  // namespace cavnet
