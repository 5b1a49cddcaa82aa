#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cavnet/device.hpp"

namespace cavnet {

// Two-level emitter in cavity 1, linearized in the single-excitation
// manifold. kappa_q and tau0 must be consistent (kappa_q = 1/tau0).
struct EmitterParams {
    double g_e = 0.0;      // rad/s, emitter to cavity-1 coupling
    double delta_e = 0.0;  // rad/s, emitter detuning from the common reference
    double kappa_q = 0.0;  // rad/s, bare emitter decay
    double tau0 = 0.0;     // s, natural lifetime

    static EmitterParams from_lifetime(double g_e, double delta_e, double tau0);
    void validate() const;
};

// Non-Hermitian effective Hamiltonian of the hybridizing pair, 2x2 without
// an emitter / 3x3 with it. Basis order: (a1, a2[, sigma-]). Drive terms are
// excluded.
MatrixC effective_hamiltonian(const EffectiveParams& p,
                              const EmitterParams* emitter = nullptr);

// Eigen decomposition of the effective Hamiltonian. Eigenvalues carry the
// mode detuning in the real part and the decay rate as -2 Im. Coefficient
// columns are normalized to unit Euclidean norm; population_in_c1 is
// |alpha_k|^2. Modes are ordered with the emitter-like mode (largest
// |gamma|^2) last and, among the cavity-like pair, bright (faster decay)
// before dark.
struct HybridModes {
    VectorC eigenvalues;      // rad/s
    MatrixC coefficients;     // column k = (alpha_k, beta_k[, gamma_k])
    Eigen::VectorXd population_in_c1;
    bool exceptional_point = false;  // defective within tolerance; Schur-based best effort
    int bright_index = 0;
    int dark_index = 1;
    int emitter_index = -1;

    int size() const { return static_cast<int>(eigenvalues.size()); }
};

HybridModes diagonalize(const MatrixC& h);

// Reorders `current` so mode k has maximal eigenvector overlap with mode k of
// `previous`; keeps identities continuous across a sweep.
void match_to_previous(HybridModes& current, const HybridModes& previous);

// Local density of states in cavity 1: for each cavity-like mode a unit-area
// Lorentzian centered on the mode detuning, weighted by the mode population
// in C1. Zero-width modes are flagged and their curve omitted.
struct LdosCurves {
    std::vector<std::vector<double>> curves;  // one per mode, aligned with omega_grid
    std::vector<bool> valid;
    std::vector<double> center;  // rad/s
    std::vector<double> width;   // rad/s, full width
    std::vector<double> weight;  // |alpha_k|^2
};

LdosCurves ldos_in_c1(const HybridModes& modes, const std::vector<double>& omega_grid);

// Emitter lifetime from the 3x3 diagonalization (primary) and from a
// second-order golden-rule sum over the bare hybrid modes (cross-check).
struct LifetimeResult {
    double tau = 0.0;                  // s, 1/kappa_q_eff
    double kappa_q_eff = 0.0;          // rad/s, -2 Im of the emitter-like eigenvalue
    double tau_golden_rule = 0.0;      // s
    double kappa_q_golden_rule = 0.0;  // rad/s
    bool weak_coupling_warning = false;
};

LifetimeResult emitter_lifetime(const EffectiveParams& p, const EmitterParams& e);

// Hybridization sweep over the cavity-2 resonance, with eigenvector-overlap
// mode tracking. delta2 is omega_c2 minus the emitter frequency when an
// emitter is present, else minus the cavity-1 resonance.
struct HybridSweepPoint {
    double delta2 = 0.0;  // rad/s
    HybridModes modes;
    std::optional<LifetimeResult> lifetime;
};

std::vector<HybridSweepPoint> hybridization_sweep(const DeviceConfig& cfg,
                                                  const std::vector<double>& cavity2_nm,
                                                  const EmitterParams* emitter = nullptr);

// CSV columns: delta2_GHz, re_ev_k, im_ev_k (k = 1..3), pop_c1_k (k = 1..3),
// lifetime_ns. Missing emitter entries are nan.
void write_hybridization_csv(const std::vector<HybridSweepPoint>& sweep,
                             const std::string& path);

}  // namespace cavnet
