#include "cavnet/hybridization.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <numeric>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "cavnet/csv.hpp"

namespace cavnet {

EmitterParams EmitterParams::from_lifetime(double g_e, double delta_e, double tau0) {
    EmitterParams e;
    e.g_e = g_e;
    e.delta_e = delta_e;
    e.tau0 = tau0;
    e.kappa_q = tau0 > 0.0 ? 1.0 / tau0 : 0.0;
    e.validate();
    return e;
}

void EmitterParams::validate() const {
    if (!(g_e >= 0.0)) throw std::invalid_argument("emitter coupling must be >= 0");
    if (!(kappa_q > 0.0) || !(tau0 > 0.0))
        throw std::invalid_argument("emitter decay rate and lifetime must be positive");
    if (std::abs(kappa_q * tau0 - 1.0) > 1e-9)
        throw std::invalid_argument("emitter kappa_q and tau0 are inconsistent");
}

MatrixC effective_hamiltonian(const EffectiveParams& p, const EmitterParams* emitter) {
    const Complex i(0.0, 1.0);
    const int n = emitter ? 3 : 2;
    MatrixC h = MatrixC::Zero(n, n);
    h(0, 0) = p.delta1_eff - i * p.kappa1_eff / 2.0;
    h(1, 1) = p.delta2_eff - i * p.kappa2_eff / 2.0;
    h(0, 1) = h(1, 0) = p.g_c - i * p.kappa_c / 2.0;
    if (emitter) {
        emitter->validate();
        h(2, 2) = emitter->delta_e - i * emitter->kappa_q / 2.0;
        h(0, 2) = h(2, 0) = emitter->g_e;
    }
    return h;
}

namespace {

void apply_order(HybridModes& m, const std::vector<int>& order) {
    const int n = m.size();
    VectorC ev(n);
    MatrixC coeff(m.coefficients.rows(), n);
    Eigen::VectorXd pop(n);
    for (int k = 0; k < n; ++k) {
        ev(k) = m.eigenvalues(order[k]);
        coeff.col(k) = m.coefficients.col(order[k]);
        pop(k) = m.population_in_c1(order[k]);
    }
    m.eigenvalues = std::move(ev);
    m.coefficients = std::move(coeff);
    m.population_in_c1 = std::move(pop);
}

void assign_labels(HybridModes& m) {
    m.emitter_index = m.size() == 3 ? 2 : -1;
    const double k0 = -2.0 * m.eigenvalues(0).imag();
    const double k1 = -2.0 * m.eigenvalues(1).imag();
    m.bright_index = k0 >= k1 ? 0 : 1;
    m.dark_index = 1 - m.bright_index;
}

}  // namespace

HybridModes diagonalize(const MatrixC& h) {
    const int n = static_cast<int>(h.rows());
    if (h.cols() != n || (n != 2 && n != 3))
        throw std::invalid_argument("diagonalize expects a 2x2 or 3x3 matrix");

    Eigen::ComplexEigenSolver<MatrixC> solver(h, /*computeEigenvectors=*/true);
    HybridModes m;
    m.eigenvalues = solver.eigenvalues();
    m.coefficients = solver.eigenvectors();
    for (int k = 0; k < n; ++k) m.coefficients.col(k).normalize();

    // A defective matrix shows up as a (nearly) singular eigenvector basis;
    // the eigenvalues are still the Schur values, so keep them and flag.
    const double h_scale = std::max(h.cwiseAbs().maxCoeff(), 1e-300);
    Eigen::JacobiSVD<MatrixC> svd(m.coefficients);
    const double sigma_min = svd.singularValues()(n - 1);
    bool residual_ok = true;
    for (int k = 0; k < n; ++k) {
        const double res =
            (h * m.coefficients.col(k) - m.eigenvalues(k) * m.coefficients.col(k)).norm();
        if (res > 1e-9 * h_scale) residual_ok = false;
    }
    m.exceptional_point = sigma_min < 1e-8 || !residual_ok;

    m.population_in_c1.resize(n);
    for (int k = 0; k < n; ++k) m.population_in_c1(k) = std::norm(m.coefficients(0, k));

    // Order: emitter-like (largest |gamma|^2) last, bright before dark.
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    if (n == 3) {
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            return std::norm(m.coefficients(2, a)) < std::norm(m.coefficients(2, b));
        });
    }
    apply_order(m, order);
    const double ka = -2.0 * m.eigenvalues(0).imag();
    const double kb = -2.0 * m.eigenvalues(1).imag();
    if (kb > ka) {
        std::vector<int> swap_first = {1, 0};
        for (int k = 2; k < n; ++k) swap_first.push_back(k);
        apply_order(m, swap_first);
    }
    assign_labels(m);
    return m;
}

void match_to_previous(HybridModes& current, const HybridModes& previous) {
    const int n = current.size();
    if (previous.size() != n) return;

    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<int> best = perm;
    double best_score = -1.0;
    do {
        double score = 0.0;
        for (int k = 0; k < n; ++k) {
            const Complex ov =
                previous.coefficients.col(k).adjoint() * current.coefficients.col(perm[k]);
            score += std::norm(ov);
        }
        if (score > best_score) {
            best_score = score;
            best = perm;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));

    apply_order(current, best);
    current.bright_index = previous.bright_index;
    current.dark_index = previous.dark_index;
    current.emitter_index = previous.emitter_index;
}

LdosCurves ldos_in_c1(const HybridModes& modes, const std::vector<double>& omega_grid) {
    LdosCurves out;
    const int n_cavity = modes.emitter_index >= 0 ? modes.size() - 1 : modes.size();
    for (int k = 0; k < n_cavity; ++k) {
        const double center = modes.eigenvalues(k).real();
        const double width = -2.0 * modes.eigenvalues(k).imag();
        const double weight = modes.population_in_c1(k);
        out.center.push_back(center);
        out.width.push_back(width);
        out.weight.push_back(weight);
        if (!(width > 0.0)) {
            out.valid.push_back(false);
            out.curves.emplace_back();
            continue;
        }
        std::vector<double> curve(omega_grid.size());
        for (std::size_t i = 0; i < omega_grid.size(); ++i) {
            const double d = omega_grid[i] - center;
            curve[i] = weight * (width / two_pi) / (d * d + width * width / 4.0);
        }
        out.valid.push_back(true);
        out.curves.push_back(std::move(curve));
    }
    return out;
}

LifetimeResult emitter_lifetime(const EffectiveParams& p, const EmitterParams& e) {
    e.validate();
    LifetimeResult out;
    const double min_linewidth = std::min(p.kappa1_eff, p.kappa2_eff);
    out.weak_coupling_warning = e.g_e >= 0.1 * std::max(min_linewidth, e.kappa_q);

    const MatrixC h3 = effective_hamiltonian(p, &e);
    const HybridModes m3 = diagonalize(h3);
    out.kappa_q_eff = -2.0 * m3.eigenvalues(m3.emitter_index).imag();
    out.tau = 1.0 / out.kappa_q_eff;

    // Second-order golden-rule sum over the bare hybrid pair. The effective
    // Hamiltonian is complex symmetric, so the perturbation weight of mode k
    // is the residue alpha_k^2 / (v_k . v_k), not |alpha_k|^2; the latter
    // drops the mode-overlap phases and misses the decay near a crossing.
    const MatrixC h2 = effective_hamiltonian(p, nullptr);
    const HybridModes m2 = diagonalize(h2);
    const Complex z_e(e.delta_e, -e.kappa_q / 2.0);
    double kq_gr = e.kappa_q;
    for (int k = 0; k < 2; ++k) {
        const VectorC v = m2.coefficients.col(k);
        const Complex vv = v.transpose() * v;
        const Complex w = v(0) * v(0) / vv;
        kq_gr += e.g_e * e.g_e * (-2.0) * std::imag(w / (z_e - m2.eigenvalues(k)));
    }
    out.kappa_q_golden_rule = kq_gr;
    out.tau_golden_rule = 1.0 / kq_gr;
    return out;
}

std::vector<HybridSweepPoint> hybridization_sweep(const DeviceConfig& cfg,
                                                  const std::vector<double>& cavity2_nm,
                                                  const EmitterParams* emitter) {
    std::vector<HybridSweepPoint> sweep;
    sweep.reserve(cavity2_nm.size());

    const double w_ref = emitter
                             ? omega_from_wavelength_nm(cfg.probe_wavelength_nm) + emitter->delta_e
                             : omega_from_wavelength_nm(cfg.cavities[0].resonance_wavelength_nm);

    DeviceConfig local = cfg;
    for (double l2 : cavity2_nm) {
        local.cavities[1].resonance_wavelength_nm = l2;
        const EffectiveParams p = effective_params(local);
        HybridSweepPoint pt;
        pt.delta2 = omega_from_wavelength_nm(l2) - w_ref;
        pt.modes = diagonalize(effective_hamiltonian(p, emitter));
        if (!sweep.empty()) match_to_previous(pt.modes, sweep.back().modes);
        if (emitter) pt.lifetime = emitter_lifetime(p, *emitter);
        sweep.push_back(std::move(pt));
    }
    return sweep;
}

void write_hybridization_csv(const std::vector<HybridSweepPoint>& sweep,
                             const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << "delta2_GHz,re_ev_1,im_ev_1,re_ev_2,im_ev_2,re_ev_3,im_ev_3,"
           "pop_c1_1,pop_c1_2,pop_c1_3,lifetime_ns\n";
    const double nan = std::nan("");
    for (const HybridSweepPoint& pt : sweep) {
        std::array<double, 3> re{nan, nan, nan}, im{nan, nan, nan}, pop{nan, nan, nan};
        for (int k = 0; k < pt.modes.size(); ++k) {
            re[k] = ghz_from_rad_per_s(pt.modes.eigenvalues(k).real());
            im[k] = ghz_from_rad_per_s(pt.modes.eigenvalues(k).imag());
            pop[k] = pt.modes.population_in_c1(k);
        }
        const double tau_ns = pt.lifetime ? pt.lifetime->tau * 1e9 : nan;
        out << format_g12(ghz_from_rad_per_s(pt.delta2));
        for (int k = 0; k < 3; ++k) out << ',' << format_g12(re[k]) << ',' << format_g12(im[k]);
        for (int k = 0; k < 3; ++k) out << ',' << format_g12(pop[k]);
        out << ',' << format_g12(tau_ns) << '\n';
    }
}

}  // namespace cavnet
