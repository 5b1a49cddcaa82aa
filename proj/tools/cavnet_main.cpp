// cavnet: scenario-driven simulator and fitter for mirror-terminated
// bus-coupled cavity arrays.
//
//   cavnet run <scenario.json>       execute a scenario, write CSV + manifest
//   cavnet validate <scenario.json>  schema and sanity checks, no execution
//   cavnet fit <data> [options]      fit a spectrum CSV or a stack manifest
//   cavnet metrics <scenario.json>   scalar figures of merit
//
// Exit codes: 0 success, 1 task error, 2 configuration error.
#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "cavnet/scenario.hpp"

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw cavnet::config_error("cannot open scenario file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run_command(const std::string& scenario_path, const std::string& output_dir, int threads,
                std::optional<std::uint64_t> seed) {
    const std::string text = slurp(scenario_path);
    cavnet::Scenario scenario = cavnet::parse_scenario_text(text, scenario_path);
    if (threads > 0) scenario.threads = threads;
    if (seed) scenario.seed = *seed;
    const cavnet::RunReport report = cavnet::run_scenario(scenario, output_dir, text);
    for (const std::string& out : report.outputs) std::cout << out << '\n';
    std::cout << "done in " << report.wall_seconds << " s\n";
    return 0;
}

int validate_command(const std::string& scenario_path) {
    const cavnet::Scenario scenario =
        cavnet::parse_scenario_text(slurp(scenario_path), scenario_path);
    const auto findings = cavnet::validate_scenario(scenario);
    if (findings.empty()) {
        std::cout << "ok: no findings\n";
        return 0;
    }
    bool blocking = false;
    for (const cavnet::Finding& f : findings) {
        std::cout << (f.blocking ? "error: " : "note: ") << f.field << ": " << f.message
                  << '\n';
        blocking = blocking || f.blocking;
    }
    return blocking ? 2 : 0;
}

int fit_command(const std::string& input, const std::string& output, bool complex_domain,
                const std::string& branch) {
    cavnet::Scenario scenario;
    scenario.task = cavnet::Task::fit;
    scenario.fit = cavnet::FitSpec{
        input, complex_domain,
        branch == "over" ? cavnet::CouplingBranch::over_coupled
                         : cavnet::CouplingBranch::under_coupled};
    scenario.output = std::filesystem::path(output).filename().string();
    const std::string dir = std::filesystem::path(output).parent_path().string();
    cavnet::run_scenario(scenario, dir.empty() ? "." : dir, "{\"task\": \"fit\"}");
    std::cout << output << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"simulator and parameter estimation for bus-coupled cavity arrays"};
    app.require_subcommand(1);

    std::string scenario_path, output_dir = ".", fit_input, fit_output = "fit.txt";
    std::string branch = "under";
    int threads = 0;
    bool complex_domain = false;
    std::optional<std::uint64_t> seed;
    std::uint64_t seed_value = 0;

    CLI::App* run = app.add_subcommand("run", "execute a scenario file");
    run->add_option("scenario", scenario_path, "scenario JSON")->required();
    run->add_option("--output-dir", output_dir, "directory for outputs");
    run->add_option("--threads", threads, "worker threads for sweeps");
    CLI::Option* seed_opt = run->add_option("--seed", seed_value, "override the scenario seed");

    CLI::App* validate = app.add_subcommand("validate", "check a scenario without running");
    validate->add_option("scenario", scenario_path, "scenario JSON")->required();

    CLI::App* fit = app.add_subcommand("fit", "fit a spectrum CSV or stack manifest");
    fit->add_option("input", fit_input, "spectrum CSV or stack manifest JSON")->required();
    fit->add_option("--output", fit_output, "fit result file");
    fit->add_flag("--complex", complex_domain, "fit the complex amplitude");
    fit->add_option("--branch", branch, "under|over (power-domain coupling branch)")
        ->check(CLI::IsMember({"under", "over"}));

    CLI::App* metrics = app.add_subcommand("metrics", "figures of merit from a scenario");
    metrics->add_option("scenario", scenario_path, "scenario JSON")->required();
    metrics->add_option("--output-dir", output_dir, "directory for outputs");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            if (seed_opt->count() > 0) seed = seed_value;
            return run_command(scenario_path, output_dir, threads, seed);
        }
        if (validate->parsed()) return validate_command(scenario_path);
        if (fit->parsed()) return fit_command(fit_input, fit_output, complex_domain, branch);
        if (metrics->parsed()) {
            const std::string text = slurp(scenario_path);
            cavnet::Scenario scenario = cavnet::parse_scenario_text(text, scenario_path);
            if (scenario.task != cavnet::Task::metrics)
                throw cavnet::config_error("metrics subcommand expects a metrics scenario");
            const cavnet::RunReport report = cavnet::run_scenario(scenario, output_dir, text);
            for (const std::string& out : report.outputs) std::cout << out << '\n';
            return 0;
        }
    } catch (const cavnet::config_error& err) {
        std::cerr << "configuration error: " << err.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& err) {
        std::cerr << "configuration error: " << err.what() << '\n';
        return 2;
    } catch (const std::exception& err) {
        std::cerr << "task error: " << err.what() << '\n';
        return 1;
    }
    return 0;
}
