#include "cavnet/tuning.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <stdexcept>

#include "cavnet/csv.hpp"

namespace cavnet {

double kappa_vs_theta(double kappa_e, double kappa_i, double theta) {
    if (!(kappa_e >= 0.0) || !(kappa_i >= 0.0))
        throw std::invalid_argument("rates must be non-negative");
    return kappa_e * (1.0 + std::cos(2.0 * theta)) + kappa_i;
}

double external_fraction(double kappa_e, double kappa_i, double theta) {
    const double kappa = kappa_vs_theta(kappa_e, kappa_i, theta);
    if (kappa <= 0.0) return 0.0;
    return kappa_e * (1.0 + std::cos(2.0 * theta)) / kappa;
}

double reflection_minimum(double kappa_e, double kappa_i, double theta) {
    const double f = external_fraction(kappa_e, kappa_i, theta);
    return (2.0 * f - 1.0) * (2.0 * f - 1.0);
}

double blue_shifted_nm(double wavelength_nm, double shift_ghz) {
    const double w = omega_from_wavelength_nm(wavelength_nm) + rad_per_s_from_ghz(shift_ghz);
    return wavelength_nm_from_omega(w);
}

double TuningPlant::intracavity_energy(std::size_t index, double laser_nm,
                                       double power) const {
    const PlantCavity& c = cavities.at(index);
    const double kappa_eff = kappa_vs_theta(c.kappa_e, 0.0, c.theta);
    const double kappa = kappa_eff + c.kappa_i;
    if (kappa <= 0.0) return 0.0;
    const double detuning =
        omega_from_wavelength_nm(c.wavelength_nm) - omega_from_wavelength_nm(laser_nm);
    const double half = kappa / 2.0;
    return power * kappa_eff / (detuning * detuning + half * half) * half;
}

PulseResult apply_pulse(TuningPlant& plant, double laser_nm, double power) {
    if (!(power >= 0.0)) throw std::invalid_argument("pulse power must be >= 0");
    PulseResult result;
    result.shift_ghz.resize(plant.cavities.size(), 0.0);
    for (std::size_t i = 0; i < plant.cavities.size(); ++i) {
        const double energy = plant.intracavity_energy(i, laser_nm, power);
        const double excess = energy - plant.sublimation_threshold;
        if (excess <= 0.0) continue;
        const double shift = plant.shift_per_pulse_gain * excess;
        plant.cavities[i].wavelength_nm = blue_shifted_nm(plant.cavities[i].wavelength_nm, shift);
        result.shift_ghz[i] = shift;
    }
    return result;
}

void apply_deposition(TuningPlant& plant, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> jitter(0.0, plant.deposition_jitter_ghz);
    for (PlantCavity& c : plant.cavities) {
        double shift = plant.deposition_redshift_ghz;
        if (plant.deposition_jitter_ghz > 0.0) shift += jitter(rng);
        c.wavelength_nm = blue_shifted_nm(c.wavelength_nm, -shift);
    }
}

void apply_freespace_pulse(TuningPlant& plant, std::size_t index, double shift_ghz,
                           double crosstalk_sigma) {
    if (index >= plant.cavities.size()) throw std::invalid_argument("cavity index out of range");
    for (std::size_t i = 0; i < plant.cavities.size(); ++i) {
        double s = 0.0;
        if (i == index) {
            s = shift_ghz;
        } else if (crosstalk_sigma > 0.0) {
            const double d = static_cast<double>(i) - static_cast<double>(index);
            s = shift_ghz * std::exp(-d * d / (2.0 * crosstalk_sigma * crosstalk_sigma));
        }
        if (s != 0.0) plant.cavities[i].wavelength_nm = blue_shifted_nm(plant.cavities[i].wavelength_nm, s);
    }
}

TuneTrace tune_to_target(TuningPlant& plant, std::size_t cavity_index,
                         double target_wavelength_nm, const ControllerConfig& ctrl) {
    if (cavity_index >= plant.cavities.size())
        throw std::invalid_argument("cavity index out of range");
    if (!(ctrl.target_step_ghz > 0.0))
        throw std::invalid_argument("target step must be positive");
    if (target_wavelength_nm > plant.cavities[cavity_index].wavelength_nm + 1e-12)
        throw std::invalid_argument("target must be blue of the current resonance");

    TuneTrace trace;
    const double half_step_nm = [&] {
        const double l = plant.cavities[cavity_index].wavelength_nm;
        return l - blue_shifted_nm(l, ctrl.target_step_ghz / 2.0);
    }();

    double power = ctrl.initial_power;
    int zero_streak = 0;
    for (int it = 0; it < ctrl.max_iterations; ++it) {
        PlantCavity& target = plant.cavities[cavity_index];
        if (target.wavelength_nm <= target_wavelength_nm + half_step_nm) {
            trace.reached = true;
            return trace;
        }
        // Fire at the current resonance; the shift detunes the cavity from
        // the laser during the pulse, which is what limits the step.
        const PulseResult pulse = apply_pulse(plant, target.wavelength_nm, power);
        const double shift = pulse.shift_ghz[cavity_index];
        trace.rows.push_back({it, cavity_index, target.wavelength_nm, power, shift});
        trace.crosstalk_ghz.push_back(pulse.shift_ghz);

        if (shift <= 1e-12) {
            ++zero_streak;
            if (zero_streak >= 60)
                throw stall_error("tuning stalled: threshold not exceeded", std::move(trace));
        } else {
            zero_streak = 0;
        }
        if (shift > 1.25 * ctrl.target_step_ghz)
            power *= ctrl.power_down_factor;
        else if (shift < 0.8 * ctrl.target_step_ghz)
            power *= ctrl.power_up_factor;
    }
    if (plant.cavities[cavity_index].wavelength_nm <= target_wavelength_nm + half_step_nm) {
        trace.reached = true;
        return trace;
    }
    throw stall_error("tuning did not reach the target within the iteration budget",
                      std::move(trace));
}

std::vector<TuneTrace> tune_uniform_array(TuningPlant& plant, double first_target_nm,
                                          double spacing_ghz, const ControllerConfig& ctrl) {
    // Red-most cavity first so later retunes do not sweep across parked ones.
    std::vector<std::size_t> order(plant.cavities.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return plant.cavities[a].wavelength_nm > plant.cavities[b].wavelength_nm;
    });

    std::vector<TuneTrace> traces;
    double target = first_target_nm;
    for (std::size_t k = 0; k < order.size(); ++k) {
        traces.push_back(tune_to_target(plant, order[k], target, ctrl));
        target = blue_shifted_nm(target, spacing_ghz);
    }
    return traces;
}

void write_tuning_csv(const std::vector<TuneTrace>& traces, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << "iteration,cavity,wavelength_nm,power,shift_GHz\n";
    for (const TuneTrace& trace : traces) {
        for (const TuneTraceRow& row : trace.rows) {
            out << row.iteration << ',' << row.cavity << ',' << format_g12(row.wavelength_nm)
                << ',' << format_g12(row.power) << ',' << format_g12(row.shift_ghz) << '\n';
        }
    }
}

}  // namespace cavnet
