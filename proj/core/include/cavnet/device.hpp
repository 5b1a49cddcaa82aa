#pragma once

#include <string>
#include <vector>

#include "cavnet/slh.hpp"
#include "cavnet/units.hpp"

namespace cavnet {

// One side-coupled cavity. kappa_e is the one-directional external rate (the
// coupling into each of the left/right propagating modes is sqrt(kappa_e/2)),
// so the effective external rate behind the mirror ranges over
// [0, 2 kappa_e]. theta is the propagation phase from the cavity to the
// terminating mirror, derived from the device phases at construction.
struct CavityParams {
    std::string label;
    double resonance_wavelength_nm = 0.0;
    double kappa_e = 0.0;  // rad/s, one-directional
    double kappa_i = 0.0;  // rad/s
    double theta = 0.0;    // rad, cavity-to-mirror phase at the reference wavelength
};

enum class DispersionMode {
    fixed_phase,         // phases frozen at their reference values
    linear_in_frequency  // phases scale with probe frequency, theta ~ omega_p/omega_ref
};

enum class Mirror { present, absent };

// Two-cavity bus device: input -> C1 -> (phi1) -> C2 -> (phi2) -> mirror.
// theta1 = phi1 + phi2 and theta2 = phi2 are the cavity-mirror phases.
// Phases are defined at reference_wavelength_nm; under
// DispersionMode::linear_in_frequency they rescale with the probe frequency.
struct DeviceConfig {
    std::vector<CavityParams> cavities;  // exactly two, waveguide order (mirror last)
    double phi1 = 0.0;                   // rad, inter-cavity phase
    double phi2 = 0.0;                   // rad, cavity-2 to mirror phase
    double probe_wavelength_nm = 0.0;
    Complex probe_amplitude = 1.0;
    double reference_wavelength_nm = 0.0;  // defaults to probe wavelength at validation
    DispersionMode dispersion = DispersionMode::fixed_phase;
    Mirror mirror = Mirror::present;

    // Checks invariants, fills reference_wavelength_nm if unset and derives
    // the per-cavity thetas from phi1/phi2. Returns *this for chaining.
    DeviceConfig& validate();
};

// Renormalized parameters of the composed two-cavity network: shifted
// detunings, bus-mediated coherent coupling g_c and correlated decay kappa_c,
// effective linewidths (including intrinsic loss) and coherent drives.
struct EffectiveParams {
    double delta1_eff = 0.0;  // rad/s
    double delta2_eff = 0.0;
    double g_c = 0.0;
    double kappa1_eff = 0.0;
    double kappa2_eff = 0.0;
    double kappa_c = 0.0;
    Complex omega1 = 0.0;  // rad/s, drive on cavity 1
    Complex omega2 = 0.0;
};

// Bare detunings Delta_l = omega_l - omega_p of both cavities at a probe
// wavelength.
std::pair<double, double> detunings_at(const DeviceConfig& cfg, double probe_wavelength_nm);

// Cavity-mirror phases (theta1, theta2) at a probe wavelength, honoring the
// dispersion mode.
std::pair<double, double> phases_at(const DeviceConfig& cfg, double probe_wavelength_nm);

// Effective parameters at the configured probe wavelength.
EffectiveParams effective_params(const DeviceConfig& cfg);

// Effective parameters with the probe moved to another wavelength (detunings
// and, under linear-in-frequency dispersion, phases are recomputed).
EffectiveParams effective_params_at(const DeviceConfig& cfg, double probe_wavelength_nm);

// Builds the full network triple by composing phase shifts, cavity ports and
// the probe, cascading both propagation directions and closing the mirror
// loop by feedback. Intrinsic losses are not part of the network (they are
// local, not bus-mediated) and enter only through EffectiveParams. Exposed as
// the second, independent route to the same physics.
LinearSLH device_slh(const DeviceConfig& cfg);
LinearSLH device_slh_at(const DeviceConfig& cfg, double probe_wavelength_nm);

}  // namespace cavnet
