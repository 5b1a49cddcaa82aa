#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "cavnet/units.hpp"

namespace cavnet {

struct stall_error;

// Interference law of the effective external decay behind the mirror:
// kappa = kappa_e (1 + cos 2 theta) + kappa_i.
double kappa_vs_theta(double kappa_e, double kappa_i, double theta);
// kappa_e_eff / kappa at the same phase.
double external_fraction(double kappa_e, double kappa_i, double theta);
// On-resonance reflection floor (2 f - 1)^2 for external fraction f.
double reflection_minimum(double kappa_e, double kappa_i, double theta);

// State of one tunable cavity under the nitrogen-film plant.
struct PlantCavity {
    std::string label;
    double wavelength_nm = 0.0;
    double kappa_e = 0.0;  // rad/s, one-directional
    double kappa_i = 0.0;  // rad/s
    double theta = 0.0;    // rad, mirror phase at the current wavelength
};

// Sublimation plant: resonant pulses build up intracavity energy; energy
// above the threshold removes film and blue-shifts the resonance linearly.
// Deposition events red-shift every cavity together.
struct TuningPlant {
    std::vector<PlantCavity> cavities;
    double sublimation_threshold = 1.0;      // energy units
    double shift_per_pulse_gain = 0.1;       // GHz per unit energy above threshold
    double deposition_redshift_ghz = 100.0;  // GHz per deposition event
    double deposition_jitter_ghz = 0.0;      // per-cavity spread, optional

    // Intracavity energy of one cavity for a laser at `laser_nm` with the
    // given power: Lorentzian buildup peaking at 4 P (kappa_e_eff/kappa^2)
    // scaled units, evaluated at the cavity's own detuning.
    double intracavity_energy(std::size_t index, double laser_nm, double power) const;
};

struct PulseResult {
    std::vector<double> shift_ghz;  // per cavity, blue shift applied
};

// One resonant pulse through the bus: every cavity sees the same field and
// shifts according to its own buildup. Selectivity is emergent, not imposed.
PulseResult apply_pulse(TuningPlant& plant, double laser_nm, double power);

// Global nitrogen deposition; all resonances move red. jitter uses the given
// seed so runs are reproducible.
void apply_deposition(TuningPlant& plant, std::uint64_t seed = 0);

// Free-space fallback: directly addressed shift with optional Gaussian
// crosstalk over the index distance.
void apply_freespace_pulse(TuningPlant& plant, std::size_t index, double shift_ghz,
                           double crosstalk_sigma = 0.0);

struct ControllerConfig {
    double target_step_ghz = 0.5;
    double pulse_duration_s = 0.1;
    double initial_power = 1.0;
    double power_up_factor = 1.3;    // applied when the last shift undershot
    double power_down_factor = 0.6;  // applied when it overshot
    int max_iterations = 500;
};

struct TuneTraceRow {
    int iteration = 0;
    std::size_t cavity = 0;
    double wavelength_nm = 0.0;
    double power = 0.0;
    double shift_ghz = 0.0;
};

struct TuneTrace {
    std::vector<TuneTraceRow> rows;
    bool reached = false;
    std::vector<std::vector<double>> crosstalk_ghz;  // per row, per cavity shifts
};

struct stall_error : std::runtime_error {
    TuneTrace trace;
    stall_error(const std::string& what, TuneTrace t)
        : std::runtime_error(what), trace(std::move(t)) {}
};

// Closed-loop retune of one cavity to a bluer target: pulses at the current
// resonance, adjusting power between pulses to hold the step size near the
// target. Throws stall_error (carrying the trace) when the plant stops
// responding or the iteration budget runs out.
TuneTrace tune_to_target(TuningPlant& plant, std::size_t cavity_index,
                         double target_wavelength_nm, const ControllerConfig& ctrl);

// Sequentially tunes every cavity onto a uniformly spaced grid ending at
// `first_target_nm` with spacing `spacing_ghz` (each successive cavity one
// step bluer). Cavities are processed red to blue.
std::vector<TuneTrace> tune_uniform_array(TuningPlant& plant, double first_target_nm,
                                          double spacing_ghz, const ControllerConfig& ctrl);

// CSV columns: iteration, cavity, wavelength_nm, power, shift_GHz.
void write_tuning_csv(const std::vector<TuneTrace>& traces, const std::string& path);

// Wavelength after a blue shift of `shift_ghz` (frequency increases).
double blue_shifted_nm(double wavelength_nm, double shift_ghz);

}  // namespace cavnet
