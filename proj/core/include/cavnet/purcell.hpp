#pragma once

#include <stdexcept>

namespace cavnet {

// Radiative budget of an emitter: natural lifetime, quantum efficiency
// gamma_r/(gamma_r+gamma_nr), Debye-Waller factor
// gamma_ZPL/(gamma_ZPL+gamma_PSB), and the cavity-enhanced lifetime.
struct EmitterRadiativeBudget {
    double tau0 = 0.0;          // s
    double eta_qe = 1.0;        // quantum efficiency, (0, 1]
    double eta_dw = 1.0;        // Debye-Waller factor, (0, 1]
    double tau_enhanced = 0.0;  // s

    void validate() const;
};

struct PurcellResult {
    double value = 0.0;
    bool inhibited = false;  // tau_enhanced > tau0, P < 0
};

// P = (tau0/tau' - 1) / (eta_qe * eta_dw). With eta_qe = 1 this is a lower
// bound. A negative value (inhibited emitter) is returned with a warning
// flag rather than rejected.
PurcellResult purcell_factor(const EmitterRadiativeBudget& b);

// C = 4 g^2 / (kappa gamma). Any consistent frequency unit.
double cooperativity(double g, double kappa, double gamma);

// Inverts the resonant Purcell relation P = 4 g^2 / (kappa gamma0) with
// gamma0 = 1/tau0.
double g_from_purcell(double purcell, double kappa, double tau0);

struct CavityCavityCooperativity {
    double value = 0.0;
    bool unbounded = false;  // a hybrid decay rate vanished
};

// 4 g_lm^2 / (kappa_h1 kappa_h2) for a hybridized pair. A vanishing hybrid
// decay rate (possible behind the mirror) is reported as unbounded.
CavityCavityCooperativity cavity_cavity_cooperativity(double g_lm, double kappa_h1,
                                                      double kappa_h2);

}  // namespace cavnet
