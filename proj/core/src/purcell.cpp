#include "cavnet/purcell.hpp"

#include <cmath>
#include <limits>

namespace cavnet {

void EmitterRadiativeBudget::validate() const {
    if (!(tau0 > 0.0)) throw std::invalid_argument("tau0 must be positive");
    if (!(tau_enhanced > 0.0)) throw std::invalid_argument("tau_enhanced must be positive");
    if (!(eta_qe > 0.0 && eta_qe <= 1.0))
        throw std::invalid_argument("eta_qe must be in (0, 1]");
    if (!(eta_dw > 0.0 && eta_dw <= 1.0))
        throw std::invalid_argument("eta_dw must be in (0, 1]");
}

PurcellResult purcell_factor(const EmitterRadiativeBudget& b) {
    b.validate();
    PurcellResult r;
    r.value = (b.tau0 / b.tau_enhanced - 1.0) / (b.eta_qe * b.eta_dw);
    r.inhibited = b.tau_enhanced > b.tau0;
    return r;
}

double cooperativity(double g, double kappa, double gamma) {
    if (!(kappa > 0.0) || !(gamma > 0.0))
        throw std::invalid_argument("kappa and gamma must be positive");
    return 4.0 * g * g / (kappa * gamma);
}

double g_from_purcell(double purcell, double kappa, double tau0) {
    if (!(purcell >= 0.0)) throw std::invalid_argument("Purcell factor must be >= 0");
    if (!(kappa > 0.0) || !(tau0 > 0.0))
        throw std::invalid_argument("kappa and tau0 must be positive");
    return std::sqrt(purcell * kappa / (4.0 * tau0));
}

CavityCavityCooperativity cavity_cavity_cooperativity(double g_lm, double kappa_h1,
                                                      double kappa_h2) {
    CavityCavityCooperativity out;
    if (kappa_h1 <= 0.0 || kappa_h2 <= 0.0) {
        out.unbounded = true;
        out.value = std::numeric_limits<double>::infinity();
        return out;
    }
    out.value = 4.0 * g_lm * g_lm / (kappa_h1 * kappa_h2);
    return out;
}

}  // namespace cavnet
