#include "cavnet/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <thread>

#include "cavnet/csv.hpp"

namespace cavnet {

namespace {

struct Coefficients {
    Complex d1, d2, g;  // i*Delta~ + kappa~/2 and i*g_c + kappa_c/2
};

Coefficients coeffs(const EffectiveParams& p) {
    const Complex i(0.0, 1.0);
    return {i * p.delta1_eff + 0.5 * p.kappa1_eff, i * p.delta2_eff + 0.5 * p.kappa2_eff,
            i * p.g_c + 0.5 * p.kappa_c};
}

}  // namespace

SteadyState steady_state(const EffectiveParams& p) {
    const Complex i(0.0, 1.0);
    const auto [d1, d2, g] = coeffs(p);
    const Complex den = g * g - d1 * d2;
    if (std::abs(den) <= 1e-30)
        throw degenerate_system_error("steady state is singular (degenerate system)");
    SteadyState s;
    s.a1 = (i * p.omega1 * d2 - i * p.omega2 * g) / den;
    s.a2 = (i * p.omega2 * d1 - i * p.omega1 * g) / den;
    return s;
}

Trajectory evolve(const EffectiveParams& p, double t_final, double dt, Complex a1_0,
                  Complex a2_0) {
    if (!(dt > 0.0) || !(t_final >= 0.0))
        throw std::invalid_argument("evolve requires dt > 0 and t_final >= 0");
    const Complex i(0.0, 1.0);
    const auto [d1, d2, g] = coeffs(p);

    const double scale =
        std::max({std::abs(p.delta1_eff), std::abs(p.delta2_eff), p.kappa1_eff, p.kappa2_eff,
                  std::abs(p.g_c), std::abs(p.kappa_c)});

    Trajectory traj;
    traj.accuracy_warning = scale > 0.0 && dt > 0.1 / scale;

    const auto rhs1 = [&](Complex a1, Complex a2) { return -d1 * a1 - g * a2 - i * p.omega1; };
    const auto rhs2 = [&](Complex a1, Complex a2) { return -d2 * a2 - g * a1 - i * p.omega2; };

    const int steps = static_cast<int>(std::ceil(t_final / dt));
    traj.t.reserve(steps + 1);
    traj.a1.reserve(steps + 1);
    traj.a2.reserve(steps + 1);

    Complex a1 = a1_0, a2 = a2_0;
    double t = 0.0;
    traj.t.push_back(t);
    traj.a1.push_back(a1);
    traj.a2.push_back(a2);
    for (int n = 0; n < steps; ++n) {
        const double h = std::min(dt, t_final - t);
        const Complex k1a = rhs1(a1, a2), k1b = rhs2(a1, a2);
        const Complex k2a = rhs1(a1 + 0.5 * h * k1a, a2 + 0.5 * h * k1b);
        const Complex k2b = rhs2(a1 + 0.5 * h * k1a, a2 + 0.5 * h * k1b);
        const Complex k3a = rhs1(a1 + 0.5 * h * k2a, a2 + 0.5 * h * k2b);
        const Complex k3b = rhs2(a1 + 0.5 * h * k2a, a2 + 0.5 * h * k2b);
        const Complex k4a = rhs1(a1 + h * k3a, a2 + h * k3b);
        const Complex k4b = rhs2(a1 + h * k3a, a2 + h * k3b);
        a1 += (h / 6.0) * (k1a + 2.0 * k2a + 2.0 * k3a + k4a);
        a2 += (h / 6.0) * (k1b + 2.0 * k2b + 2.0 * k3b + k4b);
        t += h;
        traj.t.push_back(t);
        traj.a1.push_back(a1);
        traj.a2.push_back(a2);
    }
    return traj;
}

Complex reflection_amplitude(const EffectiveParams& p, double theta1, double theta2,
                             Complex alpha, double kappa_e1, double kappa_e2) {
    const Complex i(0.0, 1.0);
    const SteadyState ss = steady_state(p);
    const Complex phase = std::exp(i * theta1);
    return phase *
           (phase * alpha + std::sqrt(2.0 * kappa_e1) * std::cos(theta1) * ss.a1 +
            std::sqrt(2.0 * kappa_e2) * std::cos(theta2) * ss.a2) /
           alpha;
}

Spectrum reflection(const DeviceConfig& cfg, const std::vector<double>& grid_nm, int threads) {
    if (grid_nm.empty()) throw std::invalid_argument("reflection grid must be non-empty");
    if (std::abs(cfg.probe_amplitude) == 0.0)
        throw std::invalid_argument("reflection requires a non-zero probe amplitude");
    if (cfg.mirror != Mirror::present)
        throw std::invalid_argument("reflection assumes the mirror-terminated device");

    const std::size_t n = grid_nm.size();
    Spectrum spec;
    spec.wavelength_nm = grid_nm;
    spec.detuning.resize(n);
    spec.reflection.resize(n);
    spec.power.resize(n);
    spec.valid.assign(n, true);

    const double w_ref = omega_from_wavelength_nm(cfg.reference_wavelength_nm);
    const auto eval_point = [&](std::size_t k) {
        const double lp = grid_nm[k];
        spec.detuning[k] = omega_from_wavelength_nm(lp) - w_ref;
        try {
            const EffectiveParams p = effective_params_at(cfg, lp);
            const auto [th1, th2] = phases_at(cfg, lp);
            const Complex r =
                reflection_amplitude(p, th1, th2, cfg.probe_amplitude,
                                     cfg.cavities[0].kappa_e, cfg.cavities[1].kappa_e);
            spec.reflection[k] = r;
            spec.power[k] = std::norm(r);
        } catch (const degenerate_system_error&) {
            // Tuning sweeps cross degeneracies on purpose; flag the point and
            // keep going.
            spec.reflection[k] = Complex(std::nan(""), std::nan(""));
            spec.power[k] = std::nan("");
            spec.valid[k] = false;
        }
    };

    const int n_threads = std::max(1, std::min<int>(threads, static_cast<int>(n)));
    if (n_threads == 1) {
        for (std::size_t k = 0; k < n; ++k) eval_point(k);
    } else {
        // Strided partition; every point runs the same arithmetic regardless
        // of the thread count, so output is identical to the serial order.
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        for (int tid = 0; tid < n_threads; ++tid) {
            pool.emplace_back([&, tid] {
                for (std::size_t k = tid; k < n; k += n_threads) eval_point(k);
            });
        }
        for (std::thread& th : pool) th.join();
    }
    return spec;
}

void write_spectrum_csv(const Spectrum& spec, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << "wavelength_nm,detuning_GHz,re_r,im_r,reflectance\n";
    for (std::size_t k = 0; k < spec.size(); ++k) {
        out << format_g12(spec.wavelength_nm[k]) << ','
            << format_g12(ghz_from_rad_per_s(spec.detuning[k])) << ','
            << format_g12(spec.reflection[k].real()) << ','
            << format_g12(spec.reflection[k].imag()) << ',' << format_g12(spec.power[k])
            << '\n';
    }
}

Spectrum read_spectrum_csv(const std::string& path) {
    const CsvTable table = read_csv(path);
    const int cw = table.column("wavelength_nm");
    const int cd = table.column("detuning_GHz");
    const int cre = table.column("re_r");
    const int cim = table.column("im_r");
    const int cp = table.column("reflectance");
    if (cw < 0 || cd < 0 || cre < 0 || cim < 0 || cp < 0)
        throw std::runtime_error("not a spectrum CSV: " + path);
    Spectrum spec;
    for (const auto& row : table.rows) {
        spec.wavelength_nm.push_back(row[cw]);
        spec.detuning.push_back(rad_per_s_from_ghz(row[cd]));
        spec.reflection.emplace_back(row[cre], row[cim]);
        spec.power.push_back(row[cp]);
        spec.valid.push_back(std::isfinite(row[cp]));
    }
    return spec;
}

std::vector<double> linspace(double first, double last, int n) {
    if (n < 1) throw std::invalid_argument("linspace requires n >= 1");
    std::vector<double> v(n);
    if (n == 1) {
        v[0] = first;
        return v;
    }
    const double step = (last - first) / (n - 1);
    for (int i = 0; i < n; ++i) v[i] = first + step * i;
    v.back() = last;
    return v;
}

}  // namespace cavnet
