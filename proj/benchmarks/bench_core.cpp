#include <benchmark/benchmark.h>

#include "cavnet/dynamics.hpp"
#include "cavnet/fitting.hpp"
#include "cavnet/hybridization.hpp"
#include "cavnet/slh.hpp"

using namespace cavnet;

namespace {

DeviceConfig bench_device() {
    DeviceConfig cfg;
    const double w = omega_from_wavelength_nm(1325.9132);
    cfg.cavities.resize(2);
    cfg.cavities[0] = {"C1", 1325.9132, 0.5 * w / 10165.0, w / 35460.0, 0.0};
    cfg.cavities[1] = {"C2", 1325.9000, 0.5 * w / 10165.0, w / 34441.0, 0.0};
    cfg.phi1 = 0.78 * pi;
    cfg.phi2 = 1.44 * pi;
    cfg.probe_wavelength_nm = 1325.880;
    cfg.validate();
    return cfg;
}

void BM_network_composition(benchmark::State& state) {
    for (auto _ : state) {
        const LinearSLH sys = series(
            feedback(concatenate(series(make_phase(1.44 * pi),
                                        series(make_cavity_port(2.0, 0.5, Direction::right, "c2"),
                                               series(make_phase(0.78 * pi),
                                                      make_cavity_port(1.5, -0.2,
                                                                       Direction::right, "c1")))),
                                 series(make_cavity_port(1.5, -0.2, Direction::left, "c1"),
                                        series(make_phase(0.78 * pi),
                                               series(make_cavity_port(2.0, 0.5, Direction::left,
                                                                       "c2"),
                                                      make_phase(1.44 * pi))))),
                     0, 1),
            make_probe(1.0));
        benchmark::DoNotOptimize(sys.scattering()(0, 0));
    }
}
BENCHMARK(BM_network_composition);

void BM_spectrum_point(benchmark::State& state) {
    const DeviceConfig cfg = bench_device();
    double lambda = 1325.85;
    for (auto _ : state) {
        const EffectiveParams p = effective_params_at(cfg, lambda);
        const auto [th1, th2] = phases_at(cfg, lambda);
        benchmark::DoNotOptimize(
            reflection_amplitude(p, th1, th2, 1.0, cfg.cavities[0].kappa_e,
                                 cfg.cavities[1].kappa_e));
        lambda += 1e-9;
    }
}
BENCHMARK(BM_spectrum_point);

void BM_diagonalize3(benchmark::State& state) {
    const DeviceConfig cfg = bench_device();
    const EffectiveParams p = effective_params(cfg);
    const EmitterParams e = EmitterParams::from_lifetime(rad_per_s_from_ghz(0.115), 0.0, 940e-9);
    const MatrixC h = effective_hamiltonian(p, &e);
    for (auto _ : state) {
        benchmark::DoNotOptimize(diagonalize(h).eigenvalues);
    }
}
BENCHMARK(BM_diagonalize3);

void BM_lorentzian_fit(benchmark::State& state) {
    DeviceConfig cfg = bench_device();
    cfg.cavities[1].kappa_e = 0.0;
    cfg.cavities[1].resonance_wavelength_nm = 1350.0;
    cfg.phi1 = 0.0;
    cfg.phi2 = 0.0;
    cfg.validate();
    const Spectrum spec = reflection(cfg, linspace(1325.6, 1326.2, 240));
    for (auto _ : state) {
        benchmark::DoNotOptimize(fit_lorentzian(spec).residual);
    }
}
BENCHMARK(BM_lorentzian_fit);

}  // namespace

BENCHMARK_MAIN();
