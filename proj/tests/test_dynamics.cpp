#include <doctest.h>

#include <filesystem>

#include "cavnet/dynamics.hpp"
#include "support.hpp"

using namespace cavnet;
using testing::Rng;

namespace {

EffectiveParams random_params(Rng& rng) {
    EffectiveParams p;
    p.delta1_eff = rng.uniform(-5.0, 5.0);
    p.delta2_eff = rng.uniform(-5.0, 5.0);
    p.g_c = rng.uniform(-2.0, 2.0);
    p.kappa1_eff = rng.uniform(0.2, 4.0);
    p.kappa2_eff = rng.uniform(0.2, 4.0);
    p.kappa_c = rng.uniform(-1.0, 1.0);
    p.omega1 = rng.complex_in_disk(2.0);
    p.omega2 = rng.complex_in_disk(2.0);
    return p;
}

DeviceConfig single_cavity_device(double kappa_e, double kappa_i, double theta,
                                  double lambda_nm = 1326.0) {
    DeviceConfig cfg;
    cfg.cavities.resize(2);
    cfg.cavities[0].label = "C1";
    cfg.cavities[0].resonance_wavelength_nm = lambda_nm;
    cfg.cavities[0].kappa_e = kappa_e;
    cfg.cavities[0].kappa_i = kappa_i;
    cfg.cavities[1].label = "C2";
    cfg.cavities[1].resonance_wavelength_nm = lambda_nm + 50.0;  // far out of band
    cfg.cavities[1].kappa_e = 0.0;
    cfg.cavities[1].kappa_i = rad_per_s_from_ghz(1.0);
    cfg.phi1 = theta;  // theta1 = phi1 + phi2
    cfg.phi2 = 0.0;
    cfg.probe_wavelength_nm = lambda_nm;
    cfg.probe_amplitude = 1.0;
    cfg.validate();
    return cfg;
}

// Wavelength span (nm) covering a frequency span (GHz) near lambda_nm.
double nm_from_ghz(double span_ghz, double lambda_nm) {
    return span_ghz * lambda_nm * lambda_nm / 2.99792458e8;
}

// Interpolated full width of the dip in 1 - |r|^2 on a dense grid.
double measured_fwhm(const Spectrum& spec) {
    std::vector<double> absorption(spec.size());
    double peak = 0.0;
    std::size_t ipk = 0;
    for (std::size_t k = 0; k < spec.size(); ++k) {
        absorption[k] = 1.0 - spec.power[k];
        if (absorption[k] > peak) {
            peak = absorption[k];
            ipk = k;
        }
    }
    const double half = peak / 2.0;
    const auto cross = [&](std::size_t from, int step) {
        std::size_t k = from;
        while (absorption[k] > half) k += step;
        // linear interpolation between k and k-step
        const double w1 = omega_from_wavelength_nm(spec.wavelength_nm[k]);
        const double w0 = omega_from_wavelength_nm(spec.wavelength_nm[k - step]);
        const double f = (half - absorption[k - step]) / (absorption[k] - absorption[k - step]);
        return w0 + f * (w1 - w0);
    };
    return std::abs(cross(ipk, +1) - cross(ipk, -1));
}

}  // namespace

TEST_CASE("steady state closed forms") {
    EffectiveParams p;
    p.kappa1_eff = 1.0;
    p.kappa2_eff = 1.0;
    const SteadyState dark = steady_state(p);
    CHECK(std::abs(dark.a1) == 0.0);
    CHECK(std::abs(dark.a2) == 0.0);

    // decoupled single cavity: a1 = -i Omega1 / (i d1 + k1/2)
    Rng rng(3);
    for (int k = 0; k < 20; ++k) {
        EffectiveParams q;
        q.delta1_eff = rng.uniform(-3.0, 3.0);
        q.kappa1_eff = rng.uniform(0.2, 3.0);
        q.kappa2_eff = rng.uniform(0.2, 3.0);
        q.omega1 = rng.complex_in_disk(1.0);
        const Complex i(0.0, 1.0);
        const Complex expected =
            -i * q.omega1 / (i * q.delta1_eff + 0.5 * q.kappa1_eff);
        const SteadyState s = steady_state(q);
        CHECK(std::abs(s.a1 - expected) <= 1e-12 * std::max(1.0, std::abs(expected)));
        CHECK(std::abs(s.a2) == 0.0);
    }

    EffectiveParams singular;  // all zero: denominator vanishes
    CHECK_THROWS_AS(steady_state(singular), degenerate_system_error);
}

TEST_CASE("free evolution is a pure rotation") {
    EffectiveParams p;
    p.delta1_eff = 2.0;
    const Trajectory traj = evolve(p, 10.0, 0.01, Complex(1.0, 0.0));
    for (std::size_t k = 0; k < traj.t.size(); k += 100) {
        CHECK(std::abs(traj.a1[k]) == doctest::Approx(1.0).epsilon(1e-9));
        const Complex expected = std::exp(Complex(0.0, -p.delta1_eff * traj.t[k]));
        CHECK(std::abs(traj.a1[k] - expected) <= 1e-6);
    }
    CHECK_FALSE(traj.accuracy_warning);
    CHECK(evolve(p, 1.0, 0.2).accuracy_warning);
}

TEST_CASE("driven cavity rings down to the steady state at kappa/2") {
    EffectiveParams p;
    p.kappa1_eff = 1.0;
    p.kappa2_eff = 1.0;
    p.omega1 = Complex(0.8, 0.0);
    const SteadyState ss = steady_state(p);
    const Trajectory traj = evolve(p, 12.0, 0.005);
    // |a1(t) - a_ss| = |a_ss| e^{-kappa t / 2}
    for (double t_check : {2.0, 5.0, 9.0}) {
        const std::size_t k = static_cast<std::size_t>(t_check / 0.005);
        const double gap = std::abs(traj.a1[k] - ss.a1);
        const double expected = std::abs(ss.a1) * std::exp(-0.5 * p.kappa1_eff * traj.t[k]);
        CHECK(gap == doctest::Approx(expected).epsilon(1e-6));
    }
}

TEST_CASE("steady state agrees with the integrated dynamics") {
    // The transient dies at the slowest hybrid-mode rate, which the
    // correlated decay can push far below min(kappa1, kappa2); draws are
    // conditioned on a finite relaxation time so the integration horizon
    // stays sane.
    Rng rng(17);
    int accepted = 0;
    while (accepted < 100) {
        const EffectiveParams p = random_params(rng);
        const Complex i(0.0, 1.0);
        MatrixC drift(2, 2);
        drift << -(i * p.delta1_eff + 0.5 * p.kappa1_eff), -(i * p.g_c + 0.5 * p.kappa_c),
            -(i * p.g_c + 0.5 * p.kappa_c), -(i * p.delta2_eff + 0.5 * p.kappa2_eff);
        const Eigen::VectorXcd ev = drift.eigenvalues();
        const double slowest = std::min(-ev(0).real(), -ev(1).real());
        if (slowest < 0.15) continue;
        ++accepted;

        const SteadyState ss = steady_state(p);
        const double scale = std::max({std::abs(p.delta1_eff), std::abs(p.delta2_eff),
                                       p.kappa1_eff, p.kappa2_eff, std::abs(p.g_c), 1.0});
        const Trajectory traj = evolve(p, 30.0 / slowest, 0.002 / scale);
        const double norm = std::max({std::abs(ss.a1), std::abs(ss.a2), 1e-12});
        CHECK(std::abs(traj.a1.back() - ss.a1) / norm <= 1e-8);
        CHECK(std::abs(traj.a2.back() - ss.a2) / norm <= 1e-8);
    }
}

TEST_CASE("reflection far from resonance approaches the mirror response") {
    const DeviceConfig cfg =
        single_cavity_device(rad_per_s_from_ghz(3.0), rad_per_s_from_ghz(0.5), 0.35);
    const Spectrum spec = reflection(cfg, {1325.0});  // ~170 GHz detuned
    CHECK(spec.power[0] == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("critical coupling nulls the on-resonance reflection") {
    const double ki = rad_per_s_from_ghz(2.0);
    // kappa_e_eff = 2 ke cos^2(theta); choose theta = 0 and ke = ki/2
    const DeviceConfig cfg = single_cavity_device(ki / 2.0, ki, 0.0);
    // effective resonance sits where delta1_eff = 0; with theta = 0 the
    // sin(2 theta) shift vanishes, so the bare resonance is the dip
    const Spectrum spec = reflection(cfg, {cfg.cavities[0].resonance_wavelength_nm});
    CHECK(spec.power[0] == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("reflection floor follows the coupling fraction") {
    // strongest coupling point of the interference law
    const double ke_eff = rad_per_s_from_ghz(22.2);
    const double ki = rad_per_s_from_ghz(5.5);
    const DeviceConfig cfg = single_cavity_device(ke_eff / 2.0, ki, 0.0);
    const Spectrum spec = reflection(cfg, {cfg.cavities[0].resonance_wavelength_nm});
    const double fraction = ke_eff / (ke_eff + ki);
    CHECK(fraction == doctest::Approx(0.80).epsilon(0.005));
    CHECK(spec.power[0] ==
          doctest::Approx((2.0 * fraction - 1.0) * (2.0 * fraction - 1.0)).epsilon(1e-9));
}

TEST_CASE("lossless network reflects everything") {
    Rng rng(29);
    for (int k = 0; k < 20; ++k) {
        DeviceConfig cfg;
        cfg.cavities.resize(2);
        cfg.cavities[0] = {"C1", 1326.0 + rng.uniform(-0.05, 0.05),
                           rad_per_s_from_ghz(rng.uniform(0.5, 5.0)), 0.0, 0.0};
        cfg.cavities[1] = {"C2", 1326.0 + rng.uniform(-0.05, 0.05),
                           rad_per_s_from_ghz(rng.uniform(0.5, 5.0)), 0.0, 0.0};
        cfg.phi1 = rng.uniform(0.0, two_pi);
        cfg.phi2 = rng.uniform(0.0, two_pi);
        cfg.probe_wavelength_nm = 1326.0;
        cfg.probe_amplitude = rng.complex_in_disk(1.0) + Complex(0.2, 0.0);
        cfg.validate();
        const Spectrum spec = reflection(cfg, linspace(1325.9, 1326.1, 101));
        for (std::size_t n = 0; n < spec.size(); ++n) {
            REQUIRE(spec.valid[n]);
            CHECK(spec.power[n] == doctest::Approx(1.0).epsilon(1e-8));
        }
    }
}

TEST_CASE("dip width equals the effective linewidth") {
    const double ke = rad_per_s_from_ghz(2.0);
    const double ki = rad_per_s_from_ghz(1.1);
    const double theta = 0.4;
    const DeviceConfig cfg = single_cavity_device(ke, ki, theta);
    const double kappa = ke * (1.0 + std::cos(2.0 * theta)) + ki;

    // window around the shifted resonance
    const double w_dip =
        omega_from_wavelength_nm(1326.0) + (ke / 2.0) * std::sin(2.0 * theta);
    const double l_dip = wavelength_nm_from_omega(w_dip);
    const double span = nm_from_ghz(6.0 * ghz_from_rad_per_s(kappa), 1326.0);
    const Spectrum spec = reflection(cfg, linspace(l_dip - span, l_dip + span, 4001));
    CHECK(measured_fwhm(spec) == doctest::Approx(kappa).epsilon(1e-3));
}

TEST_CASE("linewidth modulation follows the interference law") {
    const double ke = rad_per_s_from_ghz(2.0);
    const double ki = rad_per_s_from_ghz(1.0);
    for (double theta : {0.1, 0.5, 0.9, 1.2, 2.2, 2.9}) {
        const DeviceConfig cfg = single_cavity_device(ke, ki, theta);
        const double kappa = ke * (1.0 + std::cos(2.0 * theta)) + ki;
        const double fraction = (kappa - ki) / kappa;
        if (4.0 * fraction * (1.0 - fraction) < 0.05) continue;  // dip too shallow to measure
        const double w_dip =
            omega_from_wavelength_nm(1326.0) + (ke / 2.0) * std::sin(2.0 * theta);
        const double l_dip = wavelength_nm_from_omega(w_dip);
        const double span = nm_from_ghz(6.0 * ghz_from_rad_per_s(kappa), 1326.0);
        const Spectrum spec = reflection(cfg, linspace(l_dip - span, l_dip + span, 4001));
        CHECK(measured_fwhm(spec) == doctest::Approx(kappa).epsilon(1e-3));
    }
}

TEST_CASE("singular grid points are flagged, not fatal") {
    DeviceConfig cfg;
    cfg.cavities.resize(2);
    cfg.cavities[0] = {"C1", 1326.0, 0.0, 0.0, 0.0};  // no decay at all
    cfg.cavities[1] = {"C2", 1326.0, 0.0, 0.0, 0.0};
    cfg.phi1 = 0.0;
    cfg.phi2 = 0.0;
    cfg.probe_wavelength_nm = 1326.0;
    cfg.probe_amplitude = 1.0;
    cfg.validate();
    // the middle point sits exactly on the undamped resonance
    const Spectrum spec = reflection(cfg, {1325.9, 1326.0, 1326.1});
    CHECK(spec.valid[0]);
    CHECK_FALSE(spec.valid[1]);
    CHECK(spec.valid[2]);
    CHECK(std::isnan(spec.power[1]));
}

TEST_CASE("reflection rejects bad inputs") {
    const DeviceConfig cfg =
        single_cavity_device(rad_per_s_from_ghz(2.0), rad_per_s_from_ghz(0.5), 0.7);
    CHECK_THROWS_AS(reflection(cfg, {}), std::invalid_argument);

    DeviceConfig dark_probe = cfg;
    dark_probe.probe_amplitude = 0.0;
    CHECK_THROWS_AS(reflection(dark_probe, {1326.0}), std::invalid_argument);

    DeviceConfig open_ended = cfg;
    open_ended.mirror = Mirror::absent;
    CHECK_THROWS_AS(reflection(open_ended, {1326.0}), std::invalid_argument);

    CHECK_THROWS_AS(evolve(EffectiveParams{}, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("threaded evaluation is bit-identical to serial") {
    const DeviceConfig cfg =
        single_cavity_device(rad_per_s_from_ghz(2.0), rad_per_s_from_ghz(0.5), 0.7);
    const auto grid = linspace(1325.8, 1326.2, 501);
    const Spectrum serial = reflection(cfg, grid, 1);
    const Spectrum threaded = reflection(cfg, grid, 4);
    for (std::size_t k = 0; k < grid.size(); ++k) {
        CHECK(serial.reflection[k] == threaded.reflection[k]);
        CHECK(serial.power[k] == threaded.power[k]);
    }
}

TEST_CASE("spectrum CSV round trip") {
    const DeviceConfig cfg =
        single_cavity_device(rad_per_s_from_ghz(2.0), rad_per_s_from_ghz(0.5), 0.7);
    const Spectrum spec = reflection(cfg, linspace(1325.9, 1326.1, 21));
    const auto path = std::filesystem::temp_directory_path() / "cavnet_spec_roundtrip.csv";
    write_spectrum_csv(spec, path.string());
    const Spectrum back = read_spectrum_csv(path.string());
    REQUIRE(back.size() == spec.size());
    for (std::size_t k = 0; k < spec.size(); ++k) {
        CHECK(back.wavelength_nm[k] == doctest::Approx(spec.wavelength_nm[k]).epsilon(1e-12));
        CHECK(back.power[k] == doctest::Approx(spec.power[k]).epsilon(1e-10));
    }
    std::filesystem::remove(path);
}
