#include "cavnet/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "cavnet/csv.hpp"

namespace cavnet {

namespace {

Eigen::MatrixXd numeric_jacobian(const ResidualFn& residual, const Eigen::VectorXd& x,
                                 const Eigen::VectorXd& r0,
                                 const std::vector<double>& step_scale) {
    const int n = static_cast<int>(r0.size());
    const int p = static_cast<int>(x.size());
    Eigen::MatrixXd jac(n, p);
    for (int j = 0; j < p; ++j) {
        double h;
        if (j < static_cast<int>(step_scale.size()) && step_scale[j] > 0.0)
            h = step_scale[j];
        else
            h = 1e-7 * std::max(std::abs(x(j)), 1.0);
        Eigen::VectorXd xp = x;
        xp(j) += h;
        jac.col(j) = (residual(xp) - r0) / h;
    }
    return jac;
}

}  // namespace

LmOutcome levenberg_marquardt(const ResidualFn& residual_raw, Eigen::VectorXd x0,
                              const LmOptions& options) {
    LmOutcome out;
    Eigen::VectorXd x = std::move(x0);
    Eigen::VectorXd r = residual_raw(x);
    // A trial step may wander outside the model's domain; treat that as an
    // infinitely bad point instead of unwinding the whole fit.
    const ResidualFn residual = [&residual_raw, n = r.size()](const Eigen::VectorXd& p) {
        try {
            return residual_raw(p);
        } catch (const std::exception&) {
            return Eigen::VectorXd::Constant(n, 1e30).eval();
        }
    };
    double cost = r.squaredNorm();
    double lambda = options.lambda0;
    const int p = static_cast<int>(x.size());

    for (int it = 0; it < options.max_iterations && !out.converged; ++it) {
        out.iterations = it + 1;
        const Eigen::MatrixXd jac = numeric_jacobian(residual, x, r, options.step_scale);
        const Eigen::MatrixXd jtj = jac.transpose() * jac;
        const Eigen::VectorXd jtr = jac.transpose() * r;

        bool improved = false;
        for (int attempt = 0; attempt < 25; ++attempt) {
            Eigen::MatrixXd damped = jtj;
            for (int d = 0; d < p; ++d)
                damped(d, d) += lambda * std::max(jtj(d, d), 1e-300);
            const Eigen::VectorXd delta = damped.ldlt().solve(-jtr);
            const Eigen::VectorXd x_try = x + delta;
            const Eigen::VectorXd r_try = residual(x_try);
            const double cost_try = r_try.squaredNorm();
            if (std::isfinite(cost_try) && cost_try < cost) {
                const double drop = cost - cost_try;
                double step = 0.0;
                for (int d = 0; d < p; ++d)
                    step = std::max(step, std::abs(delta(d)) / std::max(std::abs(x(d)), 1.0));
                x = x_try;
                r = r_try;
                cost = cost_try;
                lambda = std::max(lambda * options.lambda_down, 1e-14);
                improved = true;
                if (drop <= options.ftol * std::max(cost, 1e-300) || step <= options.xtol)
                    out.converged = true;
                break;
            }
            lambda *= options.lambda_up;
        }
        // no damping value helps: a (local) minimum within resolution
        if (!improved) out.converged = true;
    }

    out.x = x;
    const int n = static_cast<int>(r.size());
    out.rms = std::sqrt(cost / std::max(n, 1));

    const Eigen::MatrixXd jac = numeric_jacobian(residual, x, r, options.step_scale);
    const Eigen::MatrixXd jtj = jac.transpose() * jac;
    const double dof = std::max(n - p, 1);
    const double sigma2 = cost / dof;
    const Eigen::MatrixXd cov = sigma2 * jtj.ldlt().solve(Eigen::MatrixXd::Identity(p, p));
    out.covariance_diag = cov.diagonal().cwiseAbs();
    return out;
}

// ---------------------------------------------------------------------------
// Single-cavity resonance fit
// ---------------------------------------------------------------------------

namespace {

double lorentzian_power(double detuning, double kappa_e_eff, double kappa_i) {
    const double kappa = kappa_e_eff + kappa_i;
    const double half = kappa / 2.0;
    const double num = detuning * detuning + (half - kappa_e_eff) * (half - kappa_e_eff);
    return num / (detuning * detuning + half * half);
}

Complex lorentzian_amplitude(double detuning, double kappa_e_eff, double kappa_i,
                             double global_phase) {
    const Complex i(0.0, 1.0);
    const double kappa = kappa_e_eff + kappa_i;
    return std::exp(i * global_phase) *
           (1.0 - kappa_e_eff / (i * detuning + kappa / 2.0));
}

struct DipEstimate {
    std::size_t index = 0;
    double lambda_nm = 0.0;
    double depth = 0.0;       // 1 - min |r|^2 relative to max
    double fwhm_omega = 0.0;  // rad/s
};

DipEstimate locate_dip(const Spectrum& spec) {
    DipEstimate dip;
    double min_p = std::numeric_limits<double>::infinity();
    double max_p = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < spec.size(); ++k) {
        if (!spec.valid[k]) continue;
        if (spec.power[k] < min_p) {
            min_p = spec.power[k];
            dip.index = k;
        }
        max_p = std::max(max_p, spec.power[k]);
    }
    dip.lambda_nm = spec.wavelength_nm[dip.index];
    dip.depth = max_p - min_p;

    // Half-depth crossings on both sides give the width estimate.
    const double half_level = min_p + dip.depth / 2.0;
    std::size_t lo = dip.index, hi = dip.index;
    while (lo > 0 && spec.power[lo] < half_level) --lo;
    while (hi + 1 < spec.size() && spec.power[hi] < half_level) ++hi;
    const double w_lo = omega_from_wavelength_nm(spec.wavelength_nm[lo]);
    const double w_hi = omega_from_wavelength_nm(spec.wavelength_nm[hi]);
    dip.fwhm_omega = std::abs(w_hi - w_lo);
    return dip;
}

}  // namespace

FitResult fit_lorentzian(const Spectrum& spec, const LorentzianFitOptions& options) {
    if (spec.size() < 10)
        throw std::invalid_argument("fit needs at least 10 points across the resonance");
    const DipEstimate dip = locate_dip(spec);
    if (!(dip.depth > options.contrast_floor))
        throw no_resonance_error("no resonance dip above the contrast floor");

    const double r_min = std::clamp(spec.power[dip.index], 0.0, 1.0);
    const double root = std::sqrt(r_min);
    double fraction = options.branch == CouplingBranch::under_coupled ? (1.0 - root) / 2.0
                                                                      : (1.0 + root) / 2.0;
    fraction = std::clamp(fraction, 1e-4, 1.0 - 1e-4);
    const double kappa0 = dip.fwhm_omega > 0.0 ? dip.fwhm_omega : rad_per_s_from_ghz(1.0);

    // sqrt parametrization keeps both rates non-negative during the search
    const auto rates = [](const Eigen::VectorXd& x) {
        return std::pair<double, double>{x(1) * x(1), x(2) * x(2)};
    };

    ResidualFn residual;
    Eigen::VectorXd x0;
    if (options.domain == FitDomain::power) {
        x0.resize(3);
        x0 << dip.lambda_nm, std::sqrt(fraction * kappa0), std::sqrt((1.0 - fraction) * kappa0);
        residual = [&spec, &rates](const Eigen::VectorXd& x) {
            const auto [ke, ki] = rates(x);
            const double w0 = omega_from_wavelength_nm(x(0));
            Eigen::VectorXd r(spec.size());
            for (std::size_t k = 0; k < spec.size(); ++k) {
                if (!spec.valid[k]) {
                    r(k) = 0.0;
                    continue;
                }
                const double d = w0 - omega_from_wavelength_nm(spec.wavelength_nm[k]);
                r(k) = lorentzian_power(d, ke, ki) - spec.power[k];
            }
            return r;
        };
    } else {
        x0.resize(4);
        const double phase0 = std::arg(spec.reflection[0]);
        x0 << dip.lambda_nm, std::sqrt(fraction * kappa0), std::sqrt((1.0 - fraction) * kappa0),
            phase0;
        residual = [&spec, &rates](const Eigen::VectorXd& x) {
            const auto [ke, ki] = rates(x);
            const double w0 = omega_from_wavelength_nm(x(0));
            Eigen::VectorXd r(2 * spec.size());
            for (std::size_t k = 0; k < spec.size(); ++k) {
                if (!spec.valid[k]) {
                    r(2 * k) = r(2 * k + 1) = 0.0;
                    continue;
                }
                // detuning convention: resonance minus probe
                const double d = w0 - omega_from_wavelength_nm(spec.wavelength_nm[k]);
                const Complex delta = lorentzian_amplitude(d, ke, ki, x(3)) - spec.reflection[k];
                r(2 * k) = delta.real();
                r(2 * k + 1) = delta.imag();
            }
            return r;
        };
    }

    LmOptions lm;
    lm.step_scale.assign(x0.size(), 0.0);
    lm.step_scale[0] = 1e-7 * dip.lambda_nm;  // nm; resolves MHz-scale line shifts
    LmOutcome outcome = levenberg_marquardt(residual, x0, lm);

    // The complex line shape identifies the branch; try the mirrored start and
    // keep the better basin.
    if (options.domain == FitDomain::complex_amplitude) {
        Eigen::VectorXd x_alt = x0;
        std::swap(x_alt(1), x_alt(2));
        const LmOutcome alt = levenberg_marquardt(residual, x_alt, lm);
        if (alt.rms < outcome.rms) outcome = alt;
    }

    const auto [ke, ki] = rates(outcome.x);
    FitResult fit;
    fit.converged = outcome.converged;
    fit.residual = outcome.rms;
    fit.parameters["lambda0_nm"] = outcome.x(0);
    fit.parameters["kappa_e_eff_GHz"] = ghz_from_rad_per_s(ke);
    fit.parameters["kappa_i_GHz"] = ghz_from_rad_per_s(ki);
    fit.parameters["kappa_GHz"] = ghz_from_rad_per_s(ke + ki);
    fit.parameters["external_fraction"] = ke / (ke + ki);
    fit.parameters["r_min_sq"] = lorentzian_power(0.0, ke, ki);
    fit.covariance_diag["lambda0_nm"] = outcome.covariance_diag(0);
    // delta method through the sqrt parametrization
    const double ue = outcome.x(1), ui = outcome.x(2);
    fit.covariance_diag["kappa_e_eff_GHz"] =
        4.0 * ue * ue * outcome.covariance_diag(1) / (two_pi * 1e9) / (two_pi * 1e9);
    fit.covariance_diag["kappa_i_GHz"] =
        4.0 * ui * ui * outcome.covariance_diag(2) / (two_pi * 1e9) / (two_pi * 1e9);
    fit.notes.push_back(options.domain == FitDomain::power
                            ? "branch fixed by option (power data is branch-degenerate)"
                            : "branch resolved from the complex line shape");
    fit.notes.push_back("uniform weighting");
    return fit;
}

// ---------------------------------------------------------------------------
// Joint two-cavity stack fit
// ---------------------------------------------------------------------------

namespace {

struct StackLayout {
    // index of each global in the parameter vector, or -1 when per-slice
    int lambda_c1 = -1, q_e = -1, q_i1 = -1, q_i2 = -1, phi1 = -1, phi2 = -1;
    std::vector<int> per_slice_base;  // base index of each slice's private block
    int lambda_c2_offset = 0;         // offset of lambda_c2 within the block
    int per_slice_count = 0;
    int total = 0;
};

struct SliceParams {
    double lambda_c1, q_e, q_i1, q_i2, phi1, phi2, lambda_c2;
};

StackLayout make_layout(const StackShare& share, int n_slices) {
    StackLayout lay;
    int next = 0;
    const auto global_slot = [&](bool shared) { return shared ? next++ : -1; };
    lay.lambda_c1 = global_slot(share.lambda_c1);
    lay.q_e = global_slot(share.q_e);
    lay.q_i1 = global_slot(share.q_i1);
    lay.q_i2 = global_slot(share.q_i2);
    lay.phi1 = global_slot(share.phi1);
    lay.phi2 = global_slot(share.phi2);

    int per = 0;
    if (!share.lambda_c1) ++per;
    if (!share.q_e) ++per;
    if (!share.q_i1) ++per;
    if (!share.q_i2) ++per;
    if (!share.phi1) ++per;
    if (!share.phi2) ++per;
    lay.lambda_c2_offset = per;
    lay.per_slice_count = per + 1;  // + lambda_c2
    for (int s = 0; s < n_slices; ++s) lay.per_slice_base.push_back(next + s * lay.per_slice_count);
    lay.total = next + n_slices * lay.per_slice_count;
    return lay;
}

SliceParams slice_params(const Eigen::VectorXd& x, const StackLayout& lay,
                         const StackShare& share, int s) {
    SliceParams p{};
    int cursor = lay.per_slice_base[s];
    const auto pick = [&](int global_idx, bool shared) {
        return shared ? x(global_idx) : x(cursor++);
    };
    p.lambda_c1 = pick(lay.lambda_c1, share.lambda_c1);
    p.q_e = std::exp(pick(lay.q_e, share.q_e));
    p.q_i1 = std::exp(pick(lay.q_i1, share.q_i1));
    p.q_i2 = std::exp(pick(lay.q_i2, share.q_i2));
    p.phi1 = pick(lay.phi1, share.phi1);
    p.phi2 = pick(lay.phi2, share.phi2);
    p.lambda_c2 = x(cursor);
    return p;
}

DeviceConfig stack_device(const SliceParams& p) {
    DeviceConfig cfg;
    const double w1 = omega_from_wavelength_nm(p.lambda_c1);
    cfg.cavities.resize(2);
    cfg.cavities[0].label = "c1";
    cfg.cavities[0].resonance_wavelength_nm = p.lambda_c1;
    cfg.cavities[0].kappa_e = 0.5 * w1 / p.q_e;
    cfg.cavities[0].kappa_i = w1 / p.q_i1;
    cfg.cavities[1].label = "c2";
    cfg.cavities[1].resonance_wavelength_nm = p.lambda_c2;
    cfg.cavities[1].kappa_e = 0.5 * w1 / p.q_e;
    cfg.cavities[1].kappa_i = w1 / p.q_i2;
    cfg.phi1 = p.phi1;
    cfg.phi2 = p.phi2;
    cfg.probe_wavelength_nm = p.lambda_c1;
    cfg.probe_amplitude = 1.0;
    return cfg;
}

double wrap_phase(double phi, double period) {
    double w = std::fmod(phi, period);
    if (w < 0.0) w += period;
    return w;
}

}  // namespace

FitResult fit_two_cavity_stack(const std::vector<Spectrum>& stack,
                               const StackFitOptions& options) {
    const int n_slices = static_cast<int>(stack.size());
    if (n_slices < 5)
        throw std::invalid_argument("stack fit needs at least 5 spectra across the crossing");

    // Initial wavelength estimates: the stationary dip is the one whose
    // position moves least across the stack; per-slice coordinates may be
    // supplied (e.g. from a stack manifest).
    std::vector<double> dip_nm(n_slices);
    for (int s = 0; s < n_slices; ++s) dip_nm[s] = locate_dip(stack[s]).lambda_nm;
    std::vector<double> sorted = dip_nm;
    std::sort(sorted.begin(), sorted.end());
    const double lambda_c1_0 = sorted[sorted.size() / 2];

    std::vector<double> lambda_c2_0 = options.initial_lambda_c2_nm;
    if (lambda_c2_0.empty()) lambda_c2_0 = dip_nm;
    if (static_cast<int>(lambda_c2_0.size()) != n_slices)
        throw std::invalid_argument("initial lambda_c2 list does not match the stack size");

    const StackShare& share = options.share;
    const StackLayout lay = make_layout(share, n_slices);

    const auto residual = [&](const Eigen::VectorXd& x) {
        std::size_t total_points = 0;
        for (const Spectrum& spec : stack) total_points += spec.size();
        Eigen::VectorXd r(total_points);
        std::size_t at = 0;
        for (int s = 0; s < n_slices; ++s) {
            const SliceParams p = slice_params(x, lay, share, s);
            DeviceConfig cfg = stack_device(p);
            cfg.validate();
            for (std::size_t k = 0; k < stack[s].size(); ++k, ++at) {
                if (!stack[s].valid[k]) {
                    r(at) = 0.0;
                    continue;
                }
                const double lp = stack[s].wavelength_nm[k];
                const EffectiveParams ep = effective_params_at(cfg, lp);
                const auto [th1, th2] = phases_at(cfg, lp);
                const Complex refl = reflection_amplitude(ep, th1, th2, 1.0,
                                                          cfg.cavities[0].kappa_e,
                                                          cfg.cavities[1].kappa_e);
                r(at) = std::norm(refl) - stack[s].power[k];
            }
        }
        return r;
    };

    const auto make_x0 = [&](double phi1_0, double phi2_0) {
        Eigen::VectorXd x0(lay.total);
        const auto set_global = [&](int idx, double v) {
            if (idx >= 0) x0(idx) = v;
        };
        set_global(lay.lambda_c1, lambda_c1_0);
        set_global(lay.q_e, std::log(options.initial_q_e));
        set_global(lay.q_i1, std::log(options.initial_q_i));
        set_global(lay.q_i2, std::log(options.initial_q_i));
        set_global(lay.phi1, phi1_0);
        set_global(lay.phi2, phi2_0);
        for (int s = 0; s < n_slices; ++s) {
            int cursor = lay.per_slice_base[s];
            if (!share.lambda_c1) x0(cursor++) = lambda_c1_0;
            if (!share.q_e) x0(cursor++) = std::log(options.initial_q_e);
            if (!share.q_i1) x0(cursor++) = std::log(options.initial_q_i);
            if (!share.q_i2) x0(cursor++) = std::log(options.initial_q_i);
            if (!share.phi1) x0(cursor++) = phi1_0;
            if (!share.phi2) x0(cursor++) = phi2_0;
            x0(cursor) = lambda_c2_0[s];
        }
        return x0;
    };

    LmOptions lm_stage1;
    lm_stage1.max_iterations = 60;
    LmOptions lm_stage2;
    lm_stage2.max_iterations = 200;

    // Stage 1 ranks the phase quadrant starts with the Q values frozen (the
    // phases are the non-convex directions); stage 2 releases everything for
    // the most promising basins.
    struct Start {
        Eigen::VectorXd x;
        double cost;
    };
    std::vector<Start> stage1;
    const int n_starts = std::max(1, options.phase_starts);
    for (int i1 = 0; i1 < n_starts; ++i1) {
        for (int i2 = 0; i2 < n_starts; ++i2) {
            const double phi1_0 = (i1 + 0.5) * pi / n_starts;
            const double phi2_0 = (i2 + 0.5) * pi / n_starts;
            Eigen::VectorXd x0 = make_x0(phi1_0, phi2_0);

            std::vector<int> frozen;
            if (lay.q_e >= 0) frozen.push_back(lay.q_e);
            if (lay.q_i1 >= 0) frozen.push_back(lay.q_i1);
            if (lay.q_i2 >= 0) frozen.push_back(lay.q_i2);
            const auto residual_frozen = [&](const Eigen::VectorXd& reduced) {
                Eigen::VectorXd full = x0;
                int rj = 0;
                for (int j = 0; j < lay.total; ++j) {
                    if (std::find(frozen.begin(), frozen.end(), j) == frozen.end())
                        full(j) = reduced(rj++);
                }
                return residual(full);
            };
            Eigen::VectorXd reduced0(lay.total - static_cast<int>(frozen.size()));
            {
                int rj = 0;
                for (int j = 0; j < lay.total; ++j)
                    if (std::find(frozen.begin(), frozen.end(), j) == frozen.end())
                        reduced0(rj++) = x0(j);
            }
            const LmOutcome s1 = levenberg_marquardt(residual_frozen, reduced0, lm_stage1);
            Eigen::VectorXd x1 = x0;
            {
                int rj = 0;
                for (int j = 0; j < lay.total; ++j)
                    if (std::find(frozen.begin(), frozen.end(), j) == frozen.end())
                        x1(j) = s1.x(rj++);
            }
            stage1.push_back({x1, residual(x1).squaredNorm()});
        }
    }
    std::sort(stage1.begin(), stage1.end(),
              [](const Start& a, const Start& b) { return a.cost < b.cost; });

    LmOutcome best;
    bool have_best = false;
    const int refine = std::min<int>(6, static_cast<int>(stage1.size()));
    for (int k = 0; k < refine; ++k) {
        const LmOutcome cand = levenberg_marquardt(residual, stage1[k].x, lm_stage2);
        if (!have_best || cand.rms < best.rms) {
            best = cand;
            have_best = true;
        }
    }

    FitResult fit;
    fit.converged = best.converged;
    fit.residual = best.rms;
    const SliceParams p0 = slice_params(best.x, lay, share, 0);
    fit.parameters["lambda_c1_nm"] = p0.lambda_c1;
    fit.parameters["q_e"] = p0.q_e;
    fit.parameters["q_i1"] = p0.q_i1;
    fit.parameters["q_i2"] = p0.q_i2;
    fit.parameters["phi1_over_pi"] = wrap_phase(p0.phi1, two_pi) / pi;
    fit.parameters["phi2_over_pi"] = wrap_phase(p0.phi2, two_pi) / pi;
    for (int s = 0; s < n_slices; ++s) {
        const SliceParams ps = slice_params(best.x, lay, share, s);
        fit.parameters["lambda_c2_nm_" + std::to_string(s)] = ps.lambda_c2;
    }

    // Interaction scale at maximal hybridization, derived from the recovered
    // parameter set.
    {
        const double w1 = omega_from_wavelength_nm(p0.lambda_c1);
        const double ke = 0.5 * w1 / p0.q_e;
        const double th1 = p0.phi1 + p0.phi2;
        const double th2 = p0.phi2;
        const double g_c = (ke / 2.0) * (std::sin(th1 + th2) + std::sin(th1 - th2));
        const double kappa_c = ke * (std::cos(th1 + th2) + std::cos(th1 - th2));
        fit.parameters["g_c_GHz"] = ghz_from_rad_per_s(std::abs(g_c));
        fit.parameters["kappa_c_GHz"] = ghz_from_rad_per_s(std::abs(kappa_c));
    }

    if (lay.lambda_c1 >= 0)
        fit.covariance_diag["lambda_c1_nm"] = best.covariance_diag(lay.lambda_c1);
    if (lay.q_e >= 0)
        fit.covariance_diag["q_e"] = p0.q_e * p0.q_e * best.covariance_diag(lay.q_e);
    if (lay.q_i1 >= 0)
        fit.covariance_diag["q_i1"] = p0.q_i1 * p0.q_i1 * best.covariance_diag(lay.q_i1);
    if (lay.q_i2 >= 0)
        fit.covariance_diag["q_i2"] = p0.q_i2 * p0.q_i2 * best.covariance_diag(lay.q_i2);
    if (lay.phi1 >= 0)
        fit.covariance_diag["phi1_over_pi"] = best.covariance_diag(lay.phi1) / (pi * pi);
    if (lay.phi2 >= 0)
        fit.covariance_diag["phi2_over_pi"] = best.covariance_diag(lay.phi2) / (pi * pi);

    fit.notes.push_back("phases are pi-periodic; values reported modulo 2pi");
    fit.notes.push_back("uniform weighting");
    return fit;
}

void write_fit_result(const FitResult& fit, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    for (const std::string& note : fit.notes) out << "# " << note << '\n';
    out << "converged = " << (fit.converged ? 1 : 0) << '\n';
    out << "residual_rms = " << format_g12(fit.residual) << '\n';
    for (const auto& [key, value] : fit.parameters)
        out << key << " = " << format_g12(value) << '\n';
    for (const auto& [key, value] : fit.covariance_diag)
        out << "var_" << key << " = " << format_g12(value) << '\n';
}

FitResult read_fit_result(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open fit result: " + path);
    FitResult fit;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            fit.notes.push_back(line.substr(line.find_first_not_of("# ")));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        std::string key = line.substr(0, eq);
        while (!key.empty() && key.back() == ' ') key.pop_back();
        const double value = std::stod(line.substr(eq + 1));
        if (key == "converged")
            fit.converged = value != 0.0;
        else if (key == "residual_rms")
            fit.residual = value;
        else if (key.rfind("var_", 0) == 0)
            fit.covariance_diag[key.substr(4)] = value;
        else
            fit.parameters[key] = value;
    }
    return fit;
}

}  // namespace cavnet
