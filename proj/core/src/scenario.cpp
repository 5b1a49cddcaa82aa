#include "cavnet/scenario.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cavnet/csv.hpp"
#include "cavnet/dynamics.hpp"

namespace cavnet {

using nlohmann::json;

namespace {

enum class Unit { wavelength, frequency, phase, time, dimensionless };

[[noreturn]] void fail(const std::string& field, const std::string& message) {
    throw config_error(field + ": " + message);
}

// Quantities are written as "value unit" strings ("22.2 GHz", "0.78 pi",
// "940 ns"); bare numbers are accepted only for dimensionless fields.
// Frequencies follow the value/2pi convention and convert to rad/s.
double parse_quantity(const json& j, const std::string& field, Unit unit) {
    if (j.is_number()) {
        if (unit == Unit::dimensionless) return j.get<double>();
        fail(field, "expected a unit-suffixed string (e.g. \"22.2 GHz\"), got a bare number");
    }
    if (!j.is_string()) fail(field, "expected a quantity string");
    const std::string text = j.get<std::string>();
    std::istringstream ss(text);
    double value = 0.0;
    std::string suffix;
    if (!(ss >> value)) fail(field, "cannot parse number in '" + text + "'");
    ss >> suffix;

    switch (unit) {
        case Unit::dimensionless:
            if (!suffix.empty()) fail(field, "unexpected unit '" + suffix + "'");
            return value;
        case Unit::wavelength:
            if (suffix == "nm") return value;
            if (suffix == "um") return value * 1e3;
            fail(field, "expected a wavelength unit (nm, um) in '" + text + "'");
        case Unit::frequency:
            if (suffix == "Hz") return rad_per_s_from_ghz(value * 1e-9);
            if (suffix == "kHz") return rad_per_s_from_ghz(value * 1e-6);
            if (suffix == "MHz") return rad_per_s_from_ghz(value * 1e-3);
            if (suffix == "GHz") return rad_per_s_from_ghz(value);
            if (suffix == "THz") return rad_per_s_from_ghz(value * 1e3);
            fail(field, "expected a frequency unit (Hz..THz) in '" + text + "'");
        case Unit::phase:
            if (suffix == "pi") return value * pi;
            if (suffix == "rad") return value;
            fail(field, "expected a phase unit (pi, rad) in '" + text + "'");
        case Unit::time:
            if (suffix == "s") return value;
            if (suffix == "ms") return value * 1e-3;
            if (suffix == "us") return value * 1e-6;
            if (suffix == "ns") return value * 1e-9;
            if (suffix == "ps") return value * 1e-12;
            fail(field, "expected a time unit (s..ps) in '" + text + "'");
    }
    fail(field, "unhandled unit class");
}

double require_quantity(const json& obj, const std::string& key, const std::string& path,
                        Unit unit) {
    if (!obj.contains(key)) fail(path + "." + key, "missing required field");
    return parse_quantity(obj.at(key), path + "." + key, unit);
}

double optional_quantity(const json& obj, const std::string& key, const std::string& path,
                         Unit unit, double fallback) {
    if (!obj.contains(key)) return fallback;
    return parse_quantity(obj.at(key), path + "." + key, unit);
}

CavityParams parse_cavity(const json& j, const std::string& path) {
    CavityParams c;
    c.label = j.value("label", "");
    c.resonance_wavelength_nm = require_quantity(j, "wavelength", path, Unit::wavelength);
    const double omega = omega_from_wavelength_nm(c.resonance_wavelength_nm);
    if (j.contains("kappa_e"))
        c.kappa_e = parse_quantity(j.at("kappa_e"), path + ".kappa_e", Unit::frequency);
    else if (j.contains("q_e"))
        c.kappa_e = 0.5 * omega / parse_quantity(j.at("q_e"), path + ".q_e", Unit::dimensionless);
    else
        fail(path, "needs kappa_e or q_e");
    if (j.contains("kappa_i"))
        c.kappa_i = parse_quantity(j.at("kappa_i"), path + ".kappa_i", Unit::frequency);
    else if (j.contains("q_i"))
        c.kappa_i = omega / parse_quantity(j.at("q_i"), path + ".q_i", Unit::dimensionless);
    else
        fail(path, "needs kappa_i or q_i");
    return c;
}

DeviceConfig parse_device(const json& j) {
    DeviceConfig cfg;
    if (!j.contains("cavities") || !j.at("cavities").is_array())
        fail("device.cavities", "must be an array of two cavities");
    int index = 0;
    for (const json& cj : j.at("cavities"))
        cfg.cavities.push_back(parse_cavity(cj, "device.cavities[" + std::to_string(index++) + "]"));
    cfg.phi1 = require_quantity(j, "phi1", "device", Unit::phase);
    cfg.phi2 = require_quantity(j, "phi2", "device", Unit::phase);

    const std::string mirror = j.value("mirror", "present");
    if (mirror == "present")
        cfg.mirror = Mirror::present;
    else if (mirror == "absent")
        cfg.mirror = Mirror::absent;
    else
        fail("device.mirror", "must be 'present' or 'absent'");

    const std::string dispersion = j.value("dispersion", "fixed-phase");
    if (dispersion == "fixed-phase")
        cfg.dispersion = DispersionMode::fixed_phase;
    else if (dispersion == "linear-in-frequency")
        cfg.dispersion = DispersionMode::linear_in_frequency;
    else
        fail("device.dispersion", "must be 'fixed-phase' or 'linear-in-frequency'");

    if (!j.contains("probe")) fail("device.probe", "missing probe block");
    const json& probe = j.at("probe");
    cfg.probe_wavelength_nm =
        require_quantity(probe, "wavelength", "device.probe", Unit::wavelength);
    if (probe.contains("amplitude")) {
        const json& a = probe.at("amplitude");
        if (a.is_number())
            cfg.probe_amplitude = a.get<double>();
        else if (a.is_array() && a.size() == 2)
            cfg.probe_amplitude = Complex(a[0].get<double>(), a[1].get<double>());
        else
            fail("device.probe.amplitude", "expected a number or [re, im]");
    }
    cfg.reference_wavelength_nm =
        optional_quantity(j, "reference_wavelength", "device", Unit::wavelength, 0.0);
    cfg.validate();
    return cfg;
}

EmitterSpec parse_emitter(const json& j) {
    EmitterSpec e;
    e.wavelength_nm = require_quantity(j, "wavelength", "emitter", Unit::wavelength);
    e.g_e = require_quantity(j, "g", "emitter", Unit::frequency);
    e.tau0 = require_quantity(j, "tau0", "emitter", Unit::time);
    if (j.contains("budget")) {
        const json& b = j.at("budget");
        EmitterRadiativeBudget budget;
        budget.tau0 = optional_quantity(b, "tau0", "emitter.budget", Unit::time, e.tau0);
        budget.eta_qe = optional_quantity(b, "eta_qe", "emitter.budget", Unit::dimensionless, 1.0);
        budget.eta_dw = optional_quantity(b, "eta_dw", "emitter.budget", Unit::dimensionless, 1.0);
        budget.tau_enhanced =
            optional_quantity(b, "tau_enhanced", "emitter.budget", Unit::time, 0.0);
        e.budget = budget;
    }
    return e;
}

SweepSpec parse_sweep(const json& j) {
    SweepSpec s;
    const std::string axis = j.value("axis", "probe_wavelength");
    if (axis == "probe_wavelength")
        s.axis = SweepAxis::probe_wavelength;
    else if (axis == "cavity2_wavelength")
        s.axis = SweepAxis::cavity2_wavelength;
    else if (axis == "theta1")
        s.axis = SweepAxis::theta1;
    else
        fail("sweep.axis", "unknown axis '" + axis + "'");
    const Unit unit = s.axis == SweepAxis::theta1 ? Unit::phase : Unit::wavelength;
    s.start = require_quantity(j, "start", "sweep", unit);
    s.stop = require_quantity(j, "stop", "sweep", unit);
    if (!j.contains("points")) fail("sweep.points", "missing required field");
    s.points = j.at("points").get<int>();
    return s;
}

ProbeGrid parse_probe_grid(const json& j) {
    ProbeGrid g;
    g.start_nm = require_quantity(j, "start", "probe_grid", Unit::wavelength);
    g.stop_nm = require_quantity(j, "stop", "probe_grid", Unit::wavelength);
    if (!j.contains("points")) fail("probe_grid.points", "missing required field");
    g.points = j.at("points").get<int>();
    return g;
}

TuneSpec parse_tune(const json& j) {
    TuneSpec t;
    if (!j.contains("cavities") || !j.at("cavities").is_array())
        fail("tune.cavities", "must be an array");
    int index = 0;
    for (const json& cj : j.at("cavities")) {
        const std::string path = "tune.cavities[" + std::to_string(index++) + "]";
        PlantCavity c;
        c.label = cj.value("label", "");
        c.wavelength_nm = require_quantity(cj, "wavelength", path, Unit::wavelength);
        c.kappa_e = require_quantity(cj, "kappa_e", path, Unit::frequency);
        c.kappa_i = require_quantity(cj, "kappa_i", path, Unit::frequency);
        c.theta = optional_quantity(cj, "theta", path, Unit::phase, 0.0);
        t.cavities.push_back(c);
    }
    t.threshold = optional_quantity(j, "threshold", "tune", Unit::dimensionless, 1.0);
    t.gain_ghz = optional_quantity(j, "gain_GHz_per_energy", "tune", Unit::dimensionless, 0.1);
    if (j.contains("controller")) {
        const json& c = j.at("controller");
        t.controller.target_step_ghz =
            optional_quantity(c, "target_step", "tune.controller", Unit::frequency,
                              rad_per_s_from_ghz(0.5)) /
            (two_pi * 1e9);
        t.controller.pulse_duration_s =
            optional_quantity(c, "pulse_duration", "tune.controller", Unit::time, 0.1);
        t.controller.initial_power =
            optional_quantity(c, "initial_power", "tune.controller", Unit::dimensionless, 1.0);
        t.controller.power_up_factor =
            optional_quantity(c, "power_up", "tune.controller", Unit::dimensionless, 1.3);
        t.controller.power_down_factor =
            optional_quantity(c, "power_down", "tune.controller", Unit::dimensionless, 0.6);
        if (c.contains("max_iterations")) t.controller.max_iterations = c.at("max_iterations");
    }
    if (j.contains("deposition")) {
        const json& d = j.at("deposition");
        t.deposition_redshift_ghz =
            require_quantity(d, "redshift", "tune.deposition", Unit::frequency) / (two_pi * 1e9);
        t.deposition_jitter_ghz =
            optional_quantity(d, "jitter", "tune.deposition", Unit::frequency, 0.0) /
            (two_pi * 1e9);
    }
    if (j.contains("uniform_array")) {
        const json& u = j.at("uniform_array");
        t.uniform_array = true;
        t.array_first_target_nm =
            require_quantity(u, "first_target", "tune.uniform_array", Unit::wavelength);
        t.array_spacing_ghz =
            require_quantity(u, "spacing", "tune.uniform_array", Unit::frequency) /
            (two_pi * 1e9);
    } else {
        if (!j.contains("cavity_index")) fail("tune.cavity_index", "missing required field");
        t.cavity_index = j.at("cavity_index").get<std::size_t>();
        t.target_nm = require_quantity(j, "target", "tune", Unit::wavelength);
    }
    return t;
}

MetricsSpec parse_metrics(const json& j) {
    MetricsSpec m;
    m.tau0 = optional_quantity(j, "tau0", "metrics", Unit::time, 0.0);
    m.eta_qe = optional_quantity(j, "eta_qe", "metrics", Unit::dimensionless, 1.0);
    m.eta_dw = optional_quantity(j, "eta_dw", "metrics", Unit::dimensionless, 1.0);
    if (j.contains("lifetimes")) {
        int index = 0;
        for (const json& e : j.at("lifetimes")) {
            const std::string path = "metrics.lifetimes[" + std::to_string(index++) + "]";
            m.lifetimes.emplace_back(e.value("label", path),
                                     require_quantity(e, "tau", path, Unit::time));
        }
    }
    if (j.contains("cooperativity")) {
        const json& c = j.at("cooperativity");
        m.cooperativity_gkg = {require_quantity(c, "g", "metrics.cooperativity", Unit::frequency),
                               require_quantity(c, "kappa", "metrics.cooperativity", Unit::frequency),
                               require_quantity(c, "gamma", "metrics.cooperativity", Unit::frequency)};
    }
    if (j.contains("g_from_purcell")) {
        const json& c = j.at("g_from_purcell");
        m.g_from_p = {require_quantity(c, "purcell", "metrics.g_from_purcell", Unit::dimensionless),
                      require_quantity(c, "kappa", "metrics.g_from_purcell", Unit::frequency),
                      require_quantity(c, "tau0", "metrics.g_from_purcell", Unit::time)};
    }
    return m;
}

FitSpec parse_fit(const json& j) {
    FitSpec f;
    if (!j.contains("input")) fail("fit.input", "missing required field");
    f.input = j.at("input").get<std::string>();
    f.complex_domain = j.value("domain", "power") == std::string("complex");
    const std::string branch = j.value("branch", "under");
    if (branch == "under")
        f.branch = CouplingBranch::under_coupled;
    else if (branch == "over")
        f.branch = CouplingBranch::over_coupled;
    else
        fail("fit.branch", "must be 'under' or 'over'");
    return f;
}

}  // namespace

Scenario parse_scenario_text(const std::string& text, const std::string& origin) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& err) {
        throw config_error(origin + ": " + err.what());
    }

    Scenario s;
    const std::string task = j.value("task", "");
    if (task == "spectrum")
        s.task = Task::spectrum;
    else if (task == "hybridize")
        s.task = Task::hybridize;
    else if (task == "lifetime")
        s.task = Task::lifetime;
    else if (task == "tune")
        s.task = Task::tune;
    else if (task == "fit")
        s.task = Task::fit;
    else if (task == "metrics")
        s.task = Task::metrics;
    else
        fail("task", "unknown or missing task '" + task + "'");

    if (j.contains("seed")) s.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("threads")) s.threads = j.at("threads").get<int>();
    s.output = j.value("output", "out.csv");
    try {
        if (j.contains("device")) s.device = parse_device(j.at("device"));
        if (j.contains("emitter")) s.emitter = parse_emitter(j.at("emitter"));
        if (j.contains("sweep")) s.sweep = parse_sweep(j.at("sweep"));
        if (j.contains("probe_grid")) s.probe_grid = parse_probe_grid(j.at("probe_grid"));
        if (j.contains("tune")) s.tune = parse_tune(j.at("tune"));
        if (j.contains("metrics")) s.metrics = parse_metrics(j.at("metrics"));
        if (j.contains("fit")) s.fit = parse_fit(j.at("fit"));
    } catch (const config_error&) {
        throw;
    } catch (const std::exception& err) {
        throw config_error(origin + ": " + err.what());
    }
    return s;
}

Scenario parse_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open scenario file: " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_scenario_text(buffer.str(), path);
}

std::vector<Finding> validate_scenario(const Scenario& s) {
    std::vector<Finding> findings;
    const auto need = [&](bool ok, const std::string& field, const std::string& message) {
        if (!ok) findings.push_back({field, message, true});
    };
    const auto advise = [&](bool ok, const std::string& field, const std::string& message) {
        if (!ok) findings.push_back({field, message, false});
    };

    const bool needs_device =
        s.task == Task::spectrum || s.task == Task::hybridize || s.task == Task::lifetime;
    if (needs_device) {
        need(s.device.has_value(), "device", "required for this task");
        need(s.sweep.has_value(), "sweep", "required for this task");
    }
    if (s.sweep) {
        need(s.sweep->points >= 1, "sweep.points", "must be >= 1");
        if (s.sweep->axis != SweepAxis::theta1) {
            need(s.sweep->start > 0.0 && s.sweep->stop > 0.0, "sweep",
                 "wavelengths must be positive");
        }
    }
    if (s.device) {
        for (std::size_t i = 0; i < s.device->cavities.size(); ++i) {
            const CavityParams& c = s.device->cavities[i];
            const std::string path = "device.cavities[" + std::to_string(i) + "]";
            need(c.kappa_i >= 0.0, path + ".kappa_i", "must be non-negative");
            advise(c.kappa_i > 0.0, path + ".kappa_i",
                   "zero intrinsic loss is an idealization");
            need(c.kappa_e >= 0.0, path + ".kappa_e", "must be non-negative");
        }
        if (s.sweep && s.sweep->axis == SweepAxis::probe_wavelength) {
            const double lo = std::min(s.sweep->start, s.sweep->stop);
            const double hi = std::max(s.sweep->start, s.sweep->stop);
            // a cavity parked out of band is legitimate; just point it out
            advise(s.device->cavities[0].resonance_wavelength_nm >= lo - 1.0 &&
                       s.device->cavities[0].resonance_wavelength_nm <= hi + 1.0,
                   "device.cavities[0].wavelength",
                   "resonance lies far outside the probe sweep");
        }
    }
    if (s.task == Task::lifetime) {
        need(s.emitter.has_value(), "emitter", "required for the lifetime task");
        if (s.sweep)
            need(s.sweep->axis == SweepAxis::cavity2_wavelength, "sweep.axis",
                 "lifetime task sweeps the cavity-2 resonance");
    }
    if (s.task == Task::hybridize && s.sweep)
        need(s.sweep->axis == SweepAxis::cavity2_wavelength, "sweep.axis",
             "hybridize task sweeps the cavity-2 resonance");
    if (s.task == Task::spectrum && s.sweep && s.sweep->axis != SweepAxis::probe_wavelength)
        need(s.probe_grid.has_value(), "probe_grid", "required for 2D spectrum stacks");
    if (s.task == Task::tune) {
        need(s.tune.has_value(), "tune", "required for the tune task");
        if (s.tune) {
            need(!s.tune->cavities.empty(), "tune.cavities", "must not be empty");
            need(s.tune->controller.target_step_ghz > 0.0, "tune.controller.target_step",
                 "must be positive");
            if (!s.tune->uniform_array && s.tune->cavity_index &&
                *s.tune->cavity_index < s.tune->cavities.size()) {
                need(s.tune->target_nm <=
                         s.tune->cavities[*s.tune->cavity_index].wavelength_nm,
                     "tune.target", "resonant tuning only blue-shifts; target must be blue");
            }
        }
    }
    if (s.task == Task::metrics) {
        need(s.metrics.has_value(), "metrics", "required for the metrics task");
        if (s.metrics && !s.metrics->lifetimes.empty())
            need(s.metrics->tau0 > 0.0, "metrics.tau0", "required to convert lifetimes");
    }
    if (s.task == Task::fit) need(s.fit.has_value(), "fit", "required for the fit task");
    if (s.emitter) {
        need(s.emitter->wavelength_nm > 0.0, "emitter.wavelength", "must be positive");
        need(s.emitter->tau0 > 0.0, "emitter.tau0", "must be positive");
        need(s.emitter->g_e >= 0.0, "emitter.g", "must be non-negative");
        if (s.emitter->budget) {
            need(s.emitter->budget->eta_qe > 0.0 && s.emitter->budget->eta_qe <= 1.0,
                 "emitter.budget.eta_qe", "must be in (0, 1]");
            need(s.emitter->budget->eta_dw > 0.0 && s.emitter->budget->eta_dw <= 1.0,
                 "emitter.budget.eta_dw", "must be in (0, 1]");
        }
    }
    return findings;
}

namespace {

EmitterParams emitter_params_for(const Scenario& s) {
    const double w_e = omega_from_wavelength_nm(s.emitter->wavelength_nm);
    const double w_p = omega_from_wavelength_nm(s.device->probe_wavelength_nm);
    return EmitterParams::from_lifetime(s.emitter->g_e, w_e - w_p, s.emitter->tau0);
}

void run_spectrum(const Scenario& s, const std::filesystem::path& dir, RunReport& report) {
    const SweepSpec& sweep = *s.sweep;
    if (sweep.axis == SweepAxis::probe_wavelength) {
        const Spectrum spec =
            reflection(*s.device, linspace(sweep.start, sweep.stop, sweep.points), s.threads);
        const auto path = dir / s.output;
        write_spectrum_csv(spec, path.string());
        report.outputs.push_back(path.string());
        return;
    }

    // 2D stack: one CSV per outer point plus a manifest naming the coordinate.
    const std::vector<double> outer = linspace(sweep.start, sweep.stop, sweep.points);
    const std::vector<double> grid =
        linspace(s.probe_grid->start_nm, s.probe_grid->stop_nm, s.probe_grid->points);
    const std::string stem = std::filesystem::path(s.output).stem().string();
    json manifest;
    manifest["axis"] =
        sweep.axis == SweepAxis::cavity2_wavelength ? "cavity2_wavelength_nm" : "theta1_rad";
    manifest["slices"] = json::array();

    DeviceConfig cfg = *s.device;
    for (int k = 0; k < sweep.points; ++k) {
        if (sweep.axis == SweepAxis::cavity2_wavelength)
            cfg.cavities[1].resonance_wavelength_nm = outer[k];
        else
            cfg.phi1 = outer[k] - cfg.phi2;  // theta1 = phi1 + phi2
        const Spectrum spec = reflection(cfg, grid, s.threads);
        char name[64];
        std::snprintf(name, sizeof(name), "%s_slice_%03d.csv", stem.c_str(), k);
        const auto path = dir / name;
        write_spectrum_csv(spec, path.string());
        report.outputs.push_back(path.string());
        manifest["slices"].push_back({{"file", name}, {"coordinate", outer[k]}});
    }
    const auto mpath = dir / (stem + ".stack.json");
    std::ofstream out(mpath);
    out << manifest.dump(2) << '\n';
    report.outputs.push_back(mpath.string());
}

void run_hybridize(const Scenario& s, const std::filesystem::path& dir, RunReport& report) {
    const SweepSpec& sweep = *s.sweep;
    std::optional<EmitterParams> emitter;
    if (s.emitter) emitter = emitter_params_for(s);
    const auto points = hybridization_sweep(*s.device,
                                            linspace(sweep.start, sweep.stop, sweep.points),
                                            emitter ? &*emitter : nullptr);
    const auto path = dir / s.output;
    write_hybridization_csv(points, path.string());
    report.outputs.push_back(path.string());
}

void run_tune(const Scenario& s, const std::filesystem::path& dir, RunReport& report) {
    const TuneSpec& t = *s.tune;
    TuningPlant plant;
    plant.cavities = t.cavities;
    plant.sublimation_threshold = t.threshold;
    plant.shift_per_pulse_gain = t.gain_ghz;
    if (t.deposition_redshift_ghz > 0.0) {
        plant.deposition_redshift_ghz = t.deposition_redshift_ghz;
        plant.deposition_jitter_ghz = t.deposition_jitter_ghz;
        apply_deposition(plant, s.seed);
    }

    std::vector<TuneTrace> traces;
    if (t.uniform_array) {
        traces = tune_uniform_array(plant, t.array_first_target_nm, t.array_spacing_ghz,
                                    t.controller);
    } else {
        traces.push_back(tune_to_target(plant, *t.cavity_index, t.target_nm, t.controller));
    }
    const auto path = dir / s.output;
    write_tuning_csv(traces, path.string());
    report.outputs.push_back(path.string());
}

void run_fit(const Scenario& s, const std::filesystem::path& dir, RunReport& report) {
    const FitSpec& f = *s.fit;
    FitResult result;
    if (f.input.size() > 5 && f.input.substr(f.input.size() - 5) == ".json") {
        // stack manifest
        std::ifstream in(f.input);
        if (!in) throw std::runtime_error("cannot open stack manifest: " + f.input);
        json manifest = json::parse(in);
        std::vector<Spectrum> stack;
        StackFitOptions options;
        const auto base = std::filesystem::path(f.input).parent_path();
        for (const json& slice : manifest.at("slices")) {
            stack.push_back(read_spectrum_csv((base / slice.at("file").get<std::string>()).string()));
            if (manifest.value("axis", "") == std::string("cavity2_wavelength_nm"))
                options.initial_lambda_c2_nm.push_back(slice.at("coordinate").get<double>());
        }
        result = fit_two_cavity_stack(stack, options);
    } else {
        LorentzianFitOptions options;
        options.branch = f.branch;
        options.domain = f.complex_domain ? FitDomain::complex_amplitude : FitDomain::power;
        result = fit_lorentzian(read_spectrum_csv(f.input), options);
    }
    const auto path = dir / s.output;
    write_fit_result(result, path.string());
    report.outputs.push_back(path.string());
}

void run_metrics(const Scenario& s, const std::filesystem::path& dir, RunReport& report) {
    const MetricsSpec& m = *s.metrics;
    FitResult out;  // reuse the key-value writer
    out.converged = true;
    for (const auto& [label, tau] : m.lifetimes) {
        EmitterRadiativeBudget budget;
        budget.tau0 = m.tau0;
        budget.eta_qe = m.eta_qe;
        budget.eta_dw = m.eta_dw;
        budget.tau_enhanced = tau;
        const PurcellResult p = purcell_factor(budget);
        out.parameters["purcell_" + label] = p.value;
    }
    if (m.cooperativity_gkg) {
        const auto& [g, kappa, gamma] = *m.cooperativity_gkg;
        out.parameters["cooperativity"] = cooperativity(g, kappa, gamma);
    }
    if (m.g_from_p) {
        const auto& [p, kappa, tau0] = *m.g_from_p;
        out.parameters["g_MHz"] = g_from_purcell(p, kappa, tau0) / two_pi / 1e6;
    }
    const auto path = dir / s.output;
    write_fit_result(out, path.string());
    report.outputs.push_back(path.string());
}

}  // namespace

std::uint64_t scenario_hash(const std::string& text) {
    std::uint64_t hash = 1469598103934665603ull;
    for (unsigned char c : text) {
        hash ^= c;
        hash *= 1099511628211ull;
    }
    return hash;
}

RunReport run_scenario(const Scenario& scenario, const std::filesystem::path& output_dir,
                       const std::string& scenario_text) {
    std::string blockers;
    for (const Finding& f : validate_scenario(scenario))
        if (f.blocking) blockers += "\n  " + f.field + ": " + f.message;
    if (!blockers.empty()) throw config_error("scenario failed validation:" + blockers);
    std::filesystem::create_directories(output_dir);

    const auto t0 = std::chrono::steady_clock::now();
    RunReport report;
    switch (scenario.task) {
        case Task::spectrum:
            run_spectrum(scenario, output_dir, report);
            break;
        case Task::hybridize:
        case Task::lifetime:
            run_hybridize(scenario, output_dir, report);
            break;
        case Task::tune:
            run_tune(scenario, output_dir, report);
            break;
        case Task::fit:
            run_fit(scenario, output_dir, report);
            break;
        case Task::metrics:
            run_metrics(scenario, output_dir, report);
            break;
    }
    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    json manifest;
    char hash_hex[32];
    std::snprintf(hash_hex, sizeof(hash_hex), "%016llx",
                  static_cast<unsigned long long>(scenario_hash(scenario_text)));
    manifest["scenario_hash"] = hash_hex;
    manifest["version"] = version_string;
    manifest["seed"] = scenario.seed;
    manifest["wall_seconds"] = report.wall_seconds;
    manifest["outputs"] = json::array();
    for (const std::string& path : report.outputs)
        manifest["outputs"].push_back(std::filesystem::path(path).filename().string());
    const auto mpath =
        output_dir / (std::filesystem::path(scenario.output).stem().string() + ".manifest.json");
    std::ofstream out(mpath);
    out << manifest.dump(2) << '\n';
    report.outputs.push_back(mpath.string());
    return report;
}

}  // namespace cavnet
