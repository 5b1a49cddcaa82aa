#include <doctest.h>

#include "cavnet/hybridization.hpp"
#include "cavnet/purcell.hpp"
#include "support.hpp"

using namespace cavnet;
using testing::Rng;

TEST_CASE("Purcell factor from lifetimes") {
    EmitterRadiativeBudget b;
    b.tau0 = 960e-9;
    b.eta_qe = 1.0;
    b.eta_dw = 0.23;

    b.tau_enhanced = 960e-9;
    CHECK(purcell_factor(b).value == doctest::Approx(0.0));

    b.tau_enhanced = 62.1e-9;
    CHECK(purcell_factor(b).value == doctest::Approx(62.8).epsilon(0.01));

    b.tau_enhanced = 300.5e-9;
    CHECK(purcell_factor(b).value == doctest::Approx(9.5).epsilon(0.02));

    b.tau_enhanced = 1200e-9;  // inhibited
    const PurcellResult r = purcell_factor(b);
    CHECK(r.inhibited);
    CHECK(r.value < 0.0);

    b.tau_enhanced = -1.0;
    CHECK_THROWS_AS(purcell_factor(b), std::invalid_argument);
}

TEST_CASE("cooperativity") {
    // units cancel: work in GHz/2pi directly
    CHECK(cooperativity(0.115, 5.1, 3.0) == doctest::Approx(3.5e-3).epsilon(0.05));
    CHECK(cooperativity(0.0, 1.0, 1.0) == 0.0);
    CHECK(cooperativity(0.5, 0.5, 0.005) == doctest::Approx(400.0));
    CHECK_THROWS_AS(cooperativity(1.0, 0.0, 1.0), std::invalid_argument);

    // monotone in g, anti-monotone in kappa and gamma
    Rng rng(9);
    for (int k = 0; k < 100; ++k) {
        const double g = rng.uniform(0.01, 2.0);
        const double kappa = rng.uniform(0.1, 10.0);
        const double gamma = rng.uniform(0.1, 10.0);
        CHECK(cooperativity(g * 1.1, kappa, gamma) > cooperativity(g, kappa, gamma));
        CHECK(cooperativity(g, kappa * 1.1, gamma) < cooperativity(g, kappa, gamma));
        CHECK(cooperativity(g, kappa, gamma * 1.1) < cooperativity(g, kappa, gamma));
    }
}

TEST_CASE("coupling from the Purcell factor") {
    const double kappa = rad_per_s_from_ghz(5.1);
    const double g = g_from_purcell(61.0, kappa, 940e-9);
    CHECK(g / two_pi / 1e6 == doctest::Approx(113.0).epsilon(0.05));  // MHz

    CHECK(g_from_purcell(0.0, kappa, 940e-9) == 0.0);
    CHECK(g_from_purcell(2.0, kappa, 940e-9) ==
          doctest::Approx(std::sqrt(2.0) * g_from_purcell(1.0, kappa, 940e-9)).epsilon(1e-12));

    // round trip with the resonant Purcell relation P = 4 g^2 tau0 / kappa
    Rng rng(21);
    for (int k = 0; k < 100; ++k) {
        const double g0 = rad_per_s_from_ghz(rng.uniform(0.001, 1.0));
        const double kap = rad_per_s_from_ghz(rng.uniform(0.5, 30.0));
        const double tau0 = rng.uniform(1e-7, 1e-5);
        const double p = 4.0 * g0 * g0 * tau0 / kap;
        CHECK(g_from_purcell(p, kap, tau0) == doctest::Approx(g0).epsilon(1e-12));
    }
}

TEST_CASE("cavity-cavity cooperativity values") {
    CHECK(cavity_cavity_cooperativity(8.6, 18.6, 11.5).value ==
          doctest::Approx(1.38).epsilon(0.01));
    const auto unbounded = cavity_cavity_cooperativity(1.0, 0.0, 2.0);
    CHECK(unbounded.unbounded);
}

TEST_CASE("no-mirror pair cooperativity is pinned to one") {
    Rng rng(12345);
    double worst_symmetric = 0.0;
    double worst_asymmetric = -1.0;
    for (int k = 0; k < 10000; ++k) {
        const double kappa_e = rng.uniform(0.05, 10.0);
        const double phi = rng.uniform(0.05, pi - 0.05);
        const double g = (kappa_e / 2.0) * std::sin(phi);
        const double kc = kappa_e * std::cos(phi);

        EffectiveParams p;
        p.kappa1_eff = kappa_e;
        p.kappa2_eff = kappa_e;
        p.g_c = g;
        p.kappa_c = kc;
        const HybridModes m = diagonalize(effective_hamiltonian(p));
        const double kh1 = -2.0 * m.eigenvalues(0).imag();
        const double kh2 = -2.0 * m.eigenvalues(1).imag();
        const double c = cavity_cavity_cooperativity(g, kh1, kh2).value;
        worst_symmetric = std::max(worst_symmetric, std::abs(c - 1.0));

        // asymmetric rates never beat the bound
        const double ke2 = kappa_e * rng.uniform(0.1, 1.0);
        EffectiveParams q;
        q.kappa1_eff = kappa_e;
        q.kappa2_eff = ke2;
        q.g_c = (std::sqrt(kappa_e * ke2) / 2.0) * std::sin(phi);
        q.kappa_c = std::sqrt(kappa_e * ke2) * std::cos(phi);
        const HybridModes ma = diagonalize(effective_hamiltonian(q));
        const double ca = cavity_cavity_cooperativity(
                              q.g_c, -2.0 * ma.eigenvalues(0).imag(),
                              -2.0 * ma.eigenvalues(1).imag())
                              .value;
        worst_asymmetric = std::max(worst_asymmetric, ca);
    }
    CHECK(worst_symmetric <= 1e-9);
    CHECK(worst_asymmetric <= 1.0 + 1e-9);
}

TEST_CASE("mirror unlocks cooperativity above the waveguide bound") {
    // theta = (pi/2, pi/4): hybrid rates kappa_e/2 each, coupling kappa_e/sqrt(2)
    const double kappa_e = 1.7;
    EffectiveParams p;
    p.kappa1_eff = 0.0;
    p.kappa2_eff = kappa_e;
    p.g_c = kappa_e / std::sqrt(2.0);
    p.kappa_c = 0.0;
    const HybridModes m = diagonalize(effective_hamiltonian(p));
    const double kh1 = -2.0 * m.eigenvalues(0).imag();
    const double kh2 = -2.0 * m.eigenvalues(1).imag();
    CHECK(kh1 == doctest::Approx(kappa_e / 2.0).epsilon(1e-9));
    CHECK(kh2 == doctest::Approx(kappa_e / 2.0).epsilon(1e-9));
    CHECK(cavity_cavity_cooperativity(p.g_c, kh1, kh2).value ==
          doctest::Approx(8.0).epsilon(1e-9));
}
