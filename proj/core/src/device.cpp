#include "cavnet/device.hpp"

#include <cmath>
#include <stdexcept>

namespace cavnet {

DeviceConfig& DeviceConfig::validate() {
    if (cavities.size() != 2)
        throw std::invalid_argument("device must contain exactly two cavities");
    for (const CavityParams& c : cavities) {
        if (!(c.resonance_wavelength_nm > 0.0))
            throw std::invalid_argument("cavity '" + c.label + "': wavelength must be positive");
        if (!(c.kappa_e >= 0.0))
            throw std::invalid_argument("cavity '" + c.label + "': kappa_e must be >= 0");
        if (!(c.kappa_i >= 0.0))
            throw std::invalid_argument("cavity '" + c.label + "': kappa_i must be >= 0");
    }
    if (!std::isfinite(phi1) || !std::isfinite(phi2))
        throw std::invalid_argument("propagation phases must be finite");
    if (!(probe_wavelength_nm > 0.0))
        throw std::invalid_argument("probe wavelength must be positive");
    if (reference_wavelength_nm <= 0.0) reference_wavelength_nm = probe_wavelength_nm;
    cavities[0].theta = phi1 + phi2;
    cavities[1].theta = phi2;
    return *this;
}

std::pair<double, double> detunings_at(const DeviceConfig& cfg, double probe_wavelength_nm) {
    if (!(probe_wavelength_nm > 0.0))
        throw std::invalid_argument("probe wavelength must be positive");
    const double wp = omega_from_wavelength_nm(probe_wavelength_nm);
    const double w1 = omega_from_wavelength_nm(cfg.cavities[0].resonance_wavelength_nm);
    const double w2 = omega_from_wavelength_nm(cfg.cavities[1].resonance_wavelength_nm);
    return {w1 - wp, w2 - wp};
}

std::pair<double, double> phases_at(const DeviceConfig& cfg, double probe_wavelength_nm) {
    double scale = 1.0;
    if (cfg.dispersion == DispersionMode::linear_in_frequency) {
        scale = omega_from_wavelength_nm(probe_wavelength_nm) /
                omega_from_wavelength_nm(cfg.reference_wavelength_nm);
    }
    const double p1 = cfg.phi1 * scale;
    const double p2 = cfg.phi2 * scale;
    return {p1 + p2, p2};
}

EffectiveParams effective_params_at(const DeviceConfig& cfg, double probe_wavelength_nm) {
    const auto [d1, d2] = detunings_at(cfg, probe_wavelength_nm);
    const auto [th1, th2] = phases_at(cfg, probe_wavelength_nm);
    const double ke1 = cfg.cavities[0].kappa_e;
    const double ke2 = cfg.cavities[1].kappa_e;
    const double ki1 = cfg.cavities[0].kappa_i;
    const double ki2 = cfg.cavities[1].kappa_i;
    const Complex i(0.0, 1.0);
    const Complex alpha = cfg.probe_amplitude;
    const double root = std::sqrt(ke1 * ke2);

    EffectiveParams p;
    if (cfg.mirror == Mirror::present) {
        p.delta1_eff = d1 + (ke1 / 2.0) * std::sin(2.0 * th1);
        p.delta2_eff = d2 + (ke2 / 2.0) * std::sin(2.0 * th2);
        p.kappa1_eff = 2.0 * ke1 * std::cos(th1) * std::cos(th1) + ki1;
        p.kappa2_eff = 2.0 * ke2 * std::cos(th2) * std::cos(th2) + ki2;
        p.g_c = (root / 2.0) * (std::sin(th1 + th2) + std::sin(th1 - th2));
        p.kappa_c = root * (std::cos(th1 + th2) + std::cos(th1 - th2));
        p.omega1 = (alpha / i) * std::sqrt(ke1 / 2.0) * (1.0 + std::exp(2.0 * i * th1));
        p.omega2 = (alpha / i) * std::sqrt(ke2 / 2.0) *
                   (std::exp(i * (th1 + th2)) + std::exp(i * (th1 - th2)));
    } else {
        // Without the mirror the sum-phase interference path is absent: each
        // cavity keeps its bare detuning and full bidirectional decay, and the
        // bus-mediated terms depend only on the relative phase.
        p.delta1_eff = d1;
        p.delta2_eff = d2;
        p.kappa1_eff = ke1 + ki1;
        p.kappa2_eff = ke2 + ki2;
        p.g_c = (root / 2.0) * std::sin(th1 - th2);
        p.kappa_c = root * std::cos(th1 - th2);
        p.omega1 = (alpha / i) * std::sqrt(ke1 / 2.0);
        p.omega2 = (alpha / i) * std::sqrt(ke2 / 2.0) * std::exp(i * (th1 - th2));
    }
    return p;
}

EffectiveParams effective_params(const DeviceConfig& cfg) {
    return effective_params_at(cfg, cfg.probe_wavelength_nm);
}

LinearSLH device_slh_at(const DeviceConfig& cfg, double probe_wavelength_nm) {
    if (cfg.mirror != Mirror::present)
        throw std::invalid_argument("network composition models the mirror-terminated device");
    const auto [d1, d2] = detunings_at(cfg, probe_wavelength_nm);
    const auto [th1, th2] = phases_at(cfg, probe_wavelength_nm);
    const double p2 = th2;
    const double p1 = th1 - th2;
    const std::string m1 = cfg.cavities[0].label.empty() ? "c1" : cfg.cavities[0].label;
    const std::string m2 = cfg.cavities[1].label.empty() ? "c2" : cfg.cavities[1].label;

    const LinearSLH right = series(
        make_phase(p2),
        series(make_cavity_port(cfg.cavities[1].kappa_e, d2, Direction::right, m2),
               series(make_phase(p1),
                      make_cavity_port(cfg.cavities[0].kappa_e, d1, Direction::right, m1))));
    const LinearSLH left = series(
        make_cavity_port(cfg.cavities[0].kappa_e, d1, Direction::left, m1),
        series(make_phase(p1),
               series(make_cavity_port(cfg.cavities[1].kappa_e, d2, Direction::left, m2),
                      make_phase(p2))));
    const LinearSLH looped = feedback(concatenate(right, left), 0, 1);
    return series(looped, make_probe(cfg.probe_amplitude));
}

LinearSLH device_slh(const DeviceConfig& cfg) {
    return device_slh_at(cfg, cfg.probe_wavelength_nm);
}

}  // namespace cavnet
