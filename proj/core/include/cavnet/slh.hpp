#pragma once

#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace cavnet {

using Complex = std::complex<double>;
using MatrixC = Eigen::MatrixXcd;
using VectorC = Eigen::VectorXcd;

struct slh_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct singular_loop_error : slh_error {
    using slh_error::slh_error;
};

// A bosonic mode of the network. Modes are identified by label: composing two
// triples that carry the same label couples them to one shared physical mode.
// A mode may declare its detuning so that a mismatched merge is rejected
// instead of silently preferring one value.
struct ModeInfo {
    std::string label;
    std::optional<double> declared_detuning;  // rad/s
};

// Linear passive open quantum component in (S, L, H) form, restricted to the
// matrix representation
//   L_p = sum_m C(p,m) a_m + d(p)
//   H   = sum_{lm} A(l,m) a_l^dag a_m + sum_l (h(l) a_l^dag + conj(h(l)) a_l)
// with S unitary and A Hermitian. This covers phase shifts, side-coupled
// cavities and coherent probes; composition is exact arithmetic on the
// matrices. Values are immutable after construction.
class LinearSLH {
public:
    LinearSLH(MatrixC scattering, MatrixC coupling, VectorC coupling_offset,
              MatrixC hamiltonian_quadratic, VectorC hamiltonian_linear,
              std::vector<ModeInfo> modes);

    // n-port pass-through (S = I, no modes). identity(0) is the unit of
    // concatenation.
    static LinearSLH identity(int n_ports);

    int ports() const { return static_cast<int>(scattering_.rows()); }
    int modes() const { return static_cast<int>(hamiltonian_quadratic_.rows()); }

    const MatrixC& scattering() const { return scattering_; }
    const MatrixC& coupling() const { return coupling_; }
    const VectorC& coupling_offset() const { return coupling_offset_; }
    const MatrixC& hamiltonian_quadratic() const { return hamiltonian_quadratic_; }
    const VectorC& hamiltonian_linear() const { return hamiltonian_linear_; }
    const std::vector<ModeInfo>& mode_info() const { return modes_; }

    int mode_index(const std::string& label) const;  // -1 if absent

    // Drift matrix of the mean-field equations, M = -iA - C^dag C / 2, so
    // that d<a>/dt = M <a> - i * drive_vector().
    MatrixC dynamics_matrix() const;

    // Total coherent drive per mode. The Hamiltonian linear part and the
    // constant offsets in L both push on <a>; the combination is
    // h - (i/2) C^dag d.
    VectorC drive_vector() const;

    bool scattering_unitary(double tol = 1e-10) const;
    bool hamiltonian_hermitian(double tol = 1e-10) const;

private:
    MatrixC scattering_;
    MatrixC coupling_;
    VectorC coupling_offset_;
    MatrixC hamiltonian_quadratic_;
    VectorC hamiltonian_linear_;
    std::vector<ModeInfo> modes_;
};

// Single-port phase shift: S = e^{i phi}, no modes.
LinearSLH make_phase(double phi);

enum class Direction { right, left };

// One directional port of a side-coupled cavity: L = sqrt(kappa_e/2) a.
// Only the right-propagating port carries the cavity Hamiltonian
// (detuning * a^dag a); the left port declares the same detuning for merge
// checking but contributes H = 0, so a cavity coupled to both directions
// counts its Hamiltonian once.
LinearSLH make_cavity_port(double kappa_e, double detuning, Direction direction,
                           std::string mode_label);

// Coherent probe: S = 1, L = alpha.
LinearSLH make_probe(Complex alpha);

// Cascade: the output of `upstream` feeds the input of `downstream`.
//   S = S2 S1,  L = L2 + S2 L1,  H = H1 + H2 + Im(L2^dag S2 L1)
// Modes with equal labels are merged.
LinearSLH series(const LinearSLH& downstream, const LinearSLH& upstream);

// Parallel composition: block-diagonal S, stacked L, summed H, with
// shared-mode merging by label.
LinearSLH concatenate(const LinearSLH& a, const LinearSLH& b);

// Feedback reduction: output `out_port` is looped into input `in_port`
// (0-based). Requires |1 - S(out_port, in_port)| > 1e-9.
LinearSLH feedback(const LinearSLH& g, int out_port, int in_port);

}  // namespace cavnet
