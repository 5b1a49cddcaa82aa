#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "cavnet/scenario.hpp"
#include "support.hpp"

using namespace cavnet;
namespace fs = std::filesystem;

namespace {

const char* kSpectrumScenario = R"({
  "task": "spectrum",
  "seed": 7,
  "output": "spec.csv",
  "device": {
    "cavities": [
      {"label": "C1", "wavelength": "1326.0 nm", "kappa_e": "2.0 GHz", "kappa_i": "1.0 GHz"},
      {"label": "C2", "wavelength": "1326.3 nm", "kappa_e": "1.5 GHz", "kappa_i": "0.8 GHz"}
    ],
    "phi1": "0.3 pi",
    "phi2": "0.1 pi",
    "probe": {"wavelength": "1326.0 nm", "amplitude": 1.0}
  },
  "sweep": {"axis": "probe_wavelength", "start": "1325.9 nm", "stop": "1326.4 nm", "points": 301}
})";

std::string read_file(const fs::path& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("unit-suffixed quantities parse") {
    const Scenario s = parse_scenario_text(kSpectrumScenario);
    REQUIRE(s.device.has_value());
    CHECK(s.device->cavities[0].kappa_e == doctest::Approx(rad_per_s_from_ghz(2.0)));
    CHECK(s.device->phi1 == doctest::Approx(0.3 * pi));
    CHECK(s.seed == 7);
    CHECK(s.sweep->points == 301);
}

TEST_CASE("q values convert through the resonance frequency") {
    const char* text = R"({
      "task": "spectrum",
      "device": {
        "cavities": [
          {"label": "C1", "wavelength": "1325.9132 nm", "q_e": 10165, "q_i": 35460},
          {"label": "C2", "wavelength": "1325.9132 nm", "q_e": 10165, "q_i": 34441}
        ],
        "phi1": "0.78 pi", "phi2": "1.44 pi",
        "probe": {"wavelength": "1325.88 nm"}
      },
      "sweep": {"axis": "probe_wavelength", "start": "1325.7 nm", "stop": "1326.1 nm", "points": 5}
    })";
    const Scenario s = parse_scenario_text(text);
    const double w = omega_from_wavelength_nm(1325.9132);
    CHECK(s.device->cavities[0].kappa_e == doctest::Approx(0.5 * w / 10165.0));
    CHECK(s.device->cavities[0].kappa_i == doctest::Approx(w / 35460.0));
    // peak effective external rate is omega / q_e, about 22.2 GHz
    CHECK(ghz_from_rad_per_s(2.0 * s.device->cavities[0].kappa_e) ==
          doctest::Approx(22.24).epsilon(0.001));
}

TEST_CASE("config errors carry the field path") {
    CHECK_THROWS_WITH_AS(parse_scenario_text(R"({"task": "nope"})"),
                         doctest::Contains("task"), config_error);

    const char* bad_unit = R"({
      "task": "spectrum",
      "device": {
        "cavities": [{"label": "C1", "wavelength": "1326 nm", "kappa_e": "2.0 parsec", "kappa_i": "1 GHz"},
                     {"label": "C2", "wavelength": "1326 nm", "kappa_e": "1 GHz", "kappa_i": "1 GHz"}],
        "phi1": "0 pi", "phi2": "0 pi",
        "probe": {"wavelength": "1326 nm"}
      }
    })";
    CHECK_THROWS_WITH_AS(parse_scenario_text(bad_unit),
                         doctest::Contains("device.cavities[0].kappa_e"), config_error);

    CHECK_THROWS_WITH_AS(parse_scenario_text("{nonsense"), doctest::Contains("<string>"),
                         config_error);
}

TEST_CASE("validation findings") {
    Scenario s = parse_scenario_text(kSpectrumScenario);
    CHECK(validate_scenario(s).empty());

    // negative intrinsic rate is caught with its field path
    Scenario bad = s;
    bad.device->cavities[0].kappa_i = -1.0;
    const auto findings = validate_scenario(bad);
    REQUIRE_FALSE(findings.empty());
    bool found = false;
    for (const Finding& f : findings)
        if (f.field == "device.cavities[0].kappa_i") found = true;
    CHECK(found);

    // lifetime task without an emitter block
    Scenario no_emitter = s;
    no_emitter.task = Task::lifetime;
    bool emitter_finding = false;
    for (const Finding& f : validate_scenario(no_emitter))
        if (f.field == "emitter") emitter_finding = true;
    CHECK(emitter_finding);

    // resonance far outside the probe sweep
    Scenario off_band = s;
    off_band.device->cavities[0].resonance_wavelength_nm = 1350.0;
    bool sweep_finding = false;
    for (const Finding& f : validate_scenario(off_band))
        if (f.message.find("sweep") != std::string::npos) sweep_finding = true;
    CHECK(sweep_finding);
}

TEST_CASE("runs are deterministic") {
    const Scenario s = parse_scenario_text(kSpectrumScenario);
    const fs::path dir1 = fresh_dir("cavnet_run_a");
    const fs::path dir2 = fresh_dir("cavnet_run_b");
    run_scenario(s, dir1, kSpectrumScenario);
    run_scenario(s, dir2, kSpectrumScenario);
    CHECK(read_file(dir1 / "spec.csv") == read_file(dir2 / "spec.csv"));
    CHECK_FALSE(read_file(dir1 / "spec.csv").empty());

    // more threads, same bytes
    Scenario threaded = s;
    threaded.threads = 4;
    const fs::path dir3 = fresh_dir("cavnet_run_c");
    run_scenario(threaded, dir3, kSpectrumScenario);
    CHECK(read_file(dir1 / "spec.csv") == read_file(dir3 / "spec.csv"));

    fs::remove_all(dir1);
    fs::remove_all(dir2);
    fs::remove_all(dir3);
}

TEST_CASE("run manifest accompanies the output") {
    const Scenario s = parse_scenario_text(kSpectrumScenario);
    const fs::path dir = fresh_dir("cavnet_run_manifest");
    const RunReport report = run_scenario(s, dir, kSpectrumScenario);
    REQUIRE(report.outputs.size() == 2);
    const std::string manifest = read_file(dir / "spec.manifest.json");
    CHECK(manifest.find("scenario_hash") != std::string::npos);
    CHECK(manifest.find(version_string) != std::string::npos);
    CHECK(scenario_hash("a") != scenario_hash("b"));
    fs::remove_all(dir);
}

TEST_CASE("single-point sweep emits a single-line CSV") {
    Scenario s = parse_scenario_text(kSpectrumScenario);
    s.sweep->points = 1;
    const fs::path dir = fresh_dir("cavnet_run_single");
    run_scenario(s, dir, "{}");
    const std::string csv = read_file(dir / "spec.csv");
    int lines = 0;
    for (char c : csv)
        if (c == '\n') ++lines;
    CHECK(lines == 2);  // header + one row
    fs::remove_all(dir);
}

TEST_CASE("spectrum output feeds the fit task unchanged") {
    // near-critical single cavity so the dip is deep
    const char* gen = R"({
      "task": "spectrum",
      "output": "single.csv",
      "device": {
        "cavities": [
          {"label": "C1", "wavelength": "1326.0 nm", "kappa_e": "3.0 GHz", "kappa_i": "2.0 GHz"},
          {"label": "C2", "wavelength": "1329.0 nm", "kappa_e": "0 GHz", "kappa_i": "1 GHz"}
        ],
        "phi1": "0 pi", "phi2": "0 pi",
        "probe": {"wavelength": "1326.0 nm"}
      },
      "sweep": {"axis": "probe_wavelength", "start": "1325.75 nm", "stop": "1326.25 nm", "points": 401}
    })";
    const fs::path dir = fresh_dir("cavnet_run_roundtrip");
    run_scenario(parse_scenario_text(gen), dir, gen);

    Scenario fit_task;
    fit_task.task = Task::fit;
    fit_task.fit = FitSpec{(dir / "single.csv").string(), false, CouplingBranch::under_coupled};
    fit_task.output = "fit.txt";
    run_scenario(fit_task, dir, "{}");
    const FitResult fit = read_fit_result((dir / "fit.txt").string());
    CHECK(fit.converged);
    CHECK(fit.parameters.at("kappa_GHz") == doctest::Approx(8.0).epsilon(1e-4));
    fs::remove_all(dir);
}

TEST_CASE("seeded deposition jitter is deterministic") {
    const char* text = R"({
      "task": "tune",
      "seed": 11,
      "output": "trace.csv",
      "tune": {
        "cavities": [
          {"label": "C1", "wavelength": "1326.0 nm", "kappa_e": "2 GHz", "kappa_i": "1 GHz"},
          {"label": "C2", "wavelength": "1325.7 nm", "kappa_e": "2 GHz", "kappa_i": "1 GHz"}
        ],
        "threshold": 1.0,
        "gain_GHz_per_energy": 0.5,
        "deposition": {"redshift": "15 GHz", "jitter": "1 GHz"},
        "controller": {"initial_power": 1.25, "max_iterations": 2000},
        "cavity_index": 0,
        "target": "1326.0 nm"
      }
    })";
    Scenario s = parse_scenario_text(text);
    const fs::path dir1 = fresh_dir("cavnet_tune_seed_a");
    const fs::path dir2 = fresh_dir("cavnet_tune_seed_b");
    run_scenario(s, dir1, text);
    run_scenario(s, dir2, text);
    CHECK(read_file(dir1 / "trace.csv") == read_file(dir2 / "trace.csv"));

    Scenario other_seed = s;
    other_seed.seed = 12;
    const fs::path dir3 = fresh_dir("cavnet_tune_seed_c");
    run_scenario(other_seed, dir3, text);
    CHECK(read_file(dir1 / "trace.csv") != read_file(dir3 / "trace.csv"));
    fs::remove_all(dir1);
    fs::remove_all(dir2);
    fs::remove_all(dir3);
}

TEST_CASE("metrics task emits the figure-of-merit table") {
    const char* text = R"({
      "task": "metrics",
      "output": "metrics.txt",
      "metrics": {
        "tau0": "960 ns",
        "eta_qe": 1.0,
        "eta_dw": 0.23,
        "lifetimes": [
          {"label": "row_a", "tau": "62.1 ns"},
          {"label": "row_b", "tau": "488.0 ns"}
        ],
        "cooperativity": {"g": "115 MHz", "kappa": "5.1 GHz", "gamma": "3.0 GHz"},
        "g_from_purcell": {"purcell": 61, "kappa": "5.1 GHz", "tau0": "940 ns"}
      }
    })";
    const fs::path dir = fresh_dir("cavnet_run_metrics");
    run_scenario(parse_scenario_text(text), dir, text);
    const FitResult metrics = read_fit_result((dir / "metrics.txt").string());
    CHECK(metrics.parameters.at("purcell_row_a") == doctest::Approx(62.8).epsilon(0.01));
    CHECK(metrics.parameters.at("purcell_row_b") == doctest::Approx(4.2).epsilon(0.02));
    CHECK(metrics.parameters.at("cooperativity") == doctest::Approx(3.5e-3).epsilon(0.05));
    CHECK(metrics.parameters.at("g_MHz") == doctest::Approx(114.8).epsilon(0.01));
    fs::remove_all(dir);
}

TEST_CASE("hybridize task writes the sweep schema") {
    const char* text = R"({
      "task": "hybridize",
      "output": "hyb.csv",
      "device": {
        "cavities": [
          {"label": "C1", "wavelength": "1325.9132 nm", "q_e": 10165, "q_i": 35460},
          {"label": "C2", "wavelength": "1325.95 nm", "q_e": 10165, "q_i": 34441}
        ],
        "phi1": "0.78 pi", "phi2": "1.44 pi",
        "probe": {"wavelength": "1325.880 nm"}
      },
      "emitter": {"wavelength": "1325.880 nm", "g": "115 MHz", "tau0": "940 ns"},
      "sweep": {"axis": "cavity2_wavelength", "start": "1325.82 nm", "stop": "1325.94 nm", "points": 31}
    })";
    const fs::path dir = fresh_dir("cavnet_run_hyb");
    run_scenario(parse_scenario_text(text), dir, text);
    std::ifstream in(dir / "hyb.csv");
    std::string header;
    std::getline(in, header);
    CHECK(header ==
          "delta2_GHz,re_ev_1,im_ev_1,re_ev_2,im_ev_2,re_ev_3,im_ev_3,"
          "pop_c1_1,pop_c1_2,pop_c1_3,lifetime_ns");
    int rows = 0;
    std::string line;
    while (std::getline(in, line))
        if (!line.empty()) ++rows;
    CHECK(rows == 31);
    fs::remove_all(dir);
}

TEST_CASE("theta-axis stacks sweep the mirror phase") {
    const char* gen = R"({
      "task": "spectrum",
      "output": "phase_stack.csv",
      "device": {
        "cavities": [
          {"label": "C1", "wavelength": "1326.0 nm", "kappa_e": "2.0 GHz", "kappa_i": "1.0 GHz"},
          {"label": "C2", "wavelength": "1336.0 nm", "kappa_e": "0 GHz", "kappa_i": "1 GHz"}
        ],
        "phi1": "0 pi", "phi2": "0.05 pi",
        "probe": {"wavelength": "1326.0 nm"}
      },
      "sweep": {"axis": "theta1", "start": "0 pi", "stop": "0.45 pi", "points": 4},
      "probe_grid": {"start": "1325.8 nm", "stop": "1326.2 nm", "points": 200}
    })";
    const fs::path dir = fresh_dir("cavnet_run_theta_stack");
    run_scenario(parse_scenario_text(gen), dir, gen);
    const std::string manifest = read_file(dir / "phase_stack.stack.json");
    CHECK(manifest.find("theta1_rad") != std::string::npos);

    // the effective linewidth shrinks as theta1 grows toward pi/2
    const Spectrum first = read_spectrum_csv((dir / "phase_stack_slice_000.csv").string());
    const Spectrum last = read_spectrum_csv((dir / "phase_stack_slice_003.csv").string());
    const auto depth = [](const Spectrum& s) {
        double lo = 1e300;
        for (double p : s.power) lo = std::min(lo, p);
        return 1.0 - lo;
    };
    // theta1 = 0: fraction 4/5, floor (2*0.8-1)^2 = 0.36; theta1 = 0.45 pi:
    // effective external rate 0.098 GHz, nearly dark
    CHECK(depth(first) == doctest::Approx(1.0 - 0.36).epsilon(0.01));
    CHECK(depth(last) <= 0.45);
    fs::remove_all(dir);
}

TEST_CASE("stack generation and stack fit work through files") {
    const char* gen = R"({
      "task": "spectrum",
      "output": "stack.csv",
      "device": {
        "cavities": [
          {"label": "C1", "wavelength": "1325.9132 nm", "q_e": 10165, "q_i": 35460},
          {"label": "C2", "wavelength": "1325.90 nm", "q_e": 10165, "q_i": 34441}
        ],
        "phi1": "0.78 pi", "phi2": "1.44 pi",
        "probe": {"wavelength": "1325.880 nm"}
      },
      "sweep": {"axis": "cavity2_wavelength", "start": "1325.80 nm", "stop": "1325.96 nm", "points": 6},
      "probe_grid": {"start": "1325.53 nm", "stop": "1326.23 nm", "points": 120}
    })";
    const fs::path dir = fresh_dir("cavnet_run_stack");
    const RunReport report = run_scenario(parse_scenario_text(gen), dir, gen);
    CHECK(report.outputs.size() == 8);  // 6 slices + stack manifest + run manifest

    Scenario fit_task;
    fit_task.task = Task::fit;
    fit_task.fit = FitSpec{(dir / "stack.stack.json").string(), false,
                           CouplingBranch::under_coupled};
    fit_task.output = "stackfit.txt";
    run_scenario(fit_task, dir, "{}");
    const FitResult fit = read_fit_result((dir / "stackfit.txt").string());
    CHECK(fit.parameters.at("lambda_c1_nm") == doctest::Approx(1325.9132).epsilon(1e-7));
    CHECK(fit.parameters.at("q_e") == doctest::Approx(10165.0).epsilon(0.01));
    fs::remove_all(dir);
}
