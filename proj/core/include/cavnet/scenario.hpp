#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "cavnet/device.hpp"
#include "cavnet/fitting.hpp"
#include "cavnet/hybridization.hpp"
#include "cavnet/purcell.hpp"
#include "cavnet/tuning.hpp"

namespace cavnet {

struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Task { spectrum, hybridize, lifetime, tune, fit, metrics };

enum class SweepAxis { probe_wavelength, cavity2_wavelength, theta1 };

struct SweepSpec {
    SweepAxis axis = SweepAxis::probe_wavelength;
    double start = 0.0;  // nm for wavelength axes, rad for theta1
    double stop = 0.0;
    int points = 1;
};

// Inner probe grid for 2D spectrum stacks (outer sweep over cavity-2
// resonance or theta1).
struct ProbeGrid {
    double start_nm = 0.0;
    double stop_nm = 0.0;
    int points = 1;
};

// Emitter task inputs: wavelength fixes delta_e against the probe; the
// radiative budget feeds the metrics task.
struct EmitterSpec {
    double wavelength_nm = 0.0;
    double g_e = 0.0;   // rad/s
    double tau0 = 0.0;  // s
    std::optional<EmitterRadiativeBudget> budget;
};

struct TuneSpec {
    std::vector<PlantCavity> cavities;
    double threshold = 1.0;
    double gain_ghz = 0.1;
    ControllerConfig controller;
    std::optional<std::size_t> cavity_index;  // single retune
    double target_nm = 0.0;
    bool uniform_array = false;  // tune all cavities onto a uniform grid
    double array_first_target_nm = 0.0;
    double array_spacing_ghz = 0.0;
    // optional global deposition applied before tuning; jitter draws from the
    // scenario seed
    double deposition_redshift_ghz = 0.0;
    double deposition_jitter_ghz = 0.0;
};

struct MetricsSpec {
    double tau0 = 0.0;
    double eta_qe = 1.0;
    double eta_dw = 1.0;
    std::vector<std::pair<std::string, double>> lifetimes;  // label, tau (s)
    std::optional<std::array<double, 3>> cooperativity_gkg;  // g, kappa, gamma (rad/s)
    std::optional<std::array<double, 3>> g_from_p;           // P, kappa (rad/s), tau0 (s)
};

struct FitSpec {
    std::string input;  // spectrum CSV or stack manifest JSON
    bool complex_domain = false;
    CouplingBranch branch = CouplingBranch::under_coupled;
};

struct Scenario {
    Task task = Task::spectrum;
    std::uint64_t seed = 0;
    std::optional<DeviceConfig> device;
    std::optional<EmitterSpec> emitter;
    std::optional<SweepSpec> sweep;
    std::optional<ProbeGrid> probe_grid;
    std::optional<TuneSpec> tune;
    std::optional<MetricsSpec> metrics;
    std::optional<FitSpec> fit;
    std::string output = "out.csv";
    int threads = 1;
};

// Parses the unit-suffixed JSON scenario format. Throws config_error with the
// offending field path.
Scenario parse_scenario_file(const std::string& path);
Scenario parse_scenario_text(const std::string& text, const std::string& origin = "<string>");

struct Finding {
    std::string field;
    std::string message;
    bool blocking = true;  // advisory findings do not stop a run
};

// Schema and physics sanity checks without running the task.
std::vector<Finding> validate_scenario(const Scenario& scenario);

struct RunReport {
    std::vector<std::string> outputs;  // files written
    double wall_seconds = 0.0;
};

// Executes the scenario; outputs land in output_dir. A manifest JSON
// (scenario hash, code version, wall time) accompanies every run.
RunReport run_scenario(const Scenario& scenario, const std::filesystem::path& output_dir,
                       const std::string& scenario_text);

// FNV-1a hash of the scenario text, recorded in run manifests.
std::uint64_t scenario_hash(const std::string& text);

inline constexpr const char* version_string = "0.1.0";

}  // namespace cavnet
