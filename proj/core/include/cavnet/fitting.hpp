#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cavnet/dynamics.hpp"

namespace cavnet {

struct no_resonance_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Damped least squares on a numerically differentiated Jacobian. The model
// surfaces here are smooth and the parameter counts small, so this is all
// the optimizer the fits need.
struct LmOptions {
    int max_iterations = 200;
    double lambda0 = 1e-3;
    double lambda_up = 10.0;
    double lambda_down = 0.25;
    double ftol = 1e-14;
    double xtol = 1e-13;
    std::vector<double> step_scale;  // per-parameter finite-difference scale, optional
};

struct LmOutcome {
    Eigen::VectorXd x;
    double rms = 0.0;
    bool converged = false;
    int iterations = 0;
    Eigen::VectorXd covariance_diag;  // sigma^2 (J^T J)^-1 diagonal
};

using ResidualFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

LmOutcome levenberg_marquardt(const ResidualFn& residual, Eigen::VectorXd x0,
                              const LmOptions& options = {});

enum class CouplingBranch { under_coupled, over_coupled };
enum class FitDomain { power, complex_amplitude };

struct LorentzianFitOptions {
    CouplingBranch branch = CouplingBranch::under_coupled;
    FitDomain domain = FitDomain::power;
    double contrast_floor = 0.01;  // below this dip depth the fit refuses
};

struct FitResult {
    std::map<std::string, double> parameters;
    std::map<std::string, double> covariance_diag;
    double residual = 0.0;  // rms of the |r|^2 misfit
    bool converged = false;
    std::vector<std::string> notes;
};

// Single-cavity resonance fit: recovers lambda0_nm, kappa_e_eff and kappa_i
// from a reflection spectrum. Power data cannot distinguish the under- from
// the over-coupled branch (the |r|^2 line shapes are identical), so the
// branch is taken from the options unless the complex amplitude is fitted.
FitResult fit_lorentzian(const Spectrum& spec, const LorentzianFitOptions& options = {});

// Which global parameters are shared across the stack; per-slice lambda_c2 is
// always free.
struct StackShare {
    bool lambda_c1 = true;
    bool q_e = true;  // single Q_e for both cavities
    bool q_i1 = true;
    bool q_i2 = true;
    bool phi1 = true;
    bool phi2 = true;
};

struct StackFitOptions {
    StackShare share;
    int phase_starts = 4;  // multi-start grid is phase_starts x phase_starts over [0, pi)
    std::vector<double> initial_lambda_c2_nm;  // per slice; defaults from dip search
    double initial_q_e = 1e4;
    double initial_q_i = 3e4;
};

// Joint fit of a stack of spectra taken while cavity 2 tunes across cavity 1.
// Globals {lambda_c1, Q_e, Q_i1, Q_i2, phi1, phi2} are shared (per `share`),
// lambda_c2 is per slice. Q maps to rates as kappa_e = omega/(2 Q_e) per
// direction (so 2 kappa_e = omega/Q_e is the peak effective external rate)
// and kappa_i = omega/Q_i. The reflection model is pi-periodic in each phase,
// so phases are reported in [0, pi) and recovered modulo pi.
FitResult fit_two_cavity_stack(const std::vector<Spectrum>& stack,
                               const StackFitOptions& options = {});

// Flat key = value serialization of a fit result.
void write_fit_result(const FitResult& fit, const std::string& path);
FitResult read_fit_result(const std::string& path);

}  // namespace cavnet
