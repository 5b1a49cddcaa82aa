#include "cavnet/slh.hpp"

#include <cmath>
#include <utility>

namespace cavnet {

namespace {

constexpr double kMergeTol = 1e-9;
constexpr double kValidateTol = 1e-10;

// Union of two mode lists, first operand's order preserved. Throws if a label
// appears in both with inconsistent declared detunings.
std::vector<ModeInfo> merge_modes(const std::vector<ModeInfo>& a,
                                  const std::vector<ModeInfo>& b,
                                  std::vector<int>& map_a, std::vector<int>& map_b) {
    std::vector<ModeInfo> merged = a;
    map_a.resize(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) map_a[i] = static_cast<int>(i);

    map_b.resize(b.size());
    for (std::size_t j = 0; j < b.size(); ++j) {
        int found = -1;
        for (std::size_t i = 0; i < merged.size(); ++i) {
            if (merged[i].label == b[j].label) {
                found = static_cast<int>(i);
                break;
            }
        }
        if (found >= 0) {
            ModeInfo& m = merged[found];
            if (m.declared_detuning && b[j].declared_detuning) {
                const double da = *m.declared_detuning;
                const double db = *b[j].declared_detuning;
                if (std::abs(da - db) > kMergeTol * std::max(1.0, std::abs(da)))
                    throw slh_error("mode '" + b[j].label +
                                    "' merged with conflicting declared detunings");
            } else if (b[j].declared_detuning) {
                m.declared_detuning = b[j].declared_detuning;
            }
            map_b[j] = found;
        } else {
            merged.push_back(b[j]);
            map_b[j] = static_cast<int>(merged.size()) - 1;
        }
    }
    return merged;
}

MatrixC remap_columns(const MatrixC& src, const std::vector<int>& map, int n_modes) {
    MatrixC out = MatrixC::Zero(src.rows(), n_modes);
    for (int j = 0; j < src.cols(); ++j) out.col(map[j]) += src.col(j);
    return out;
}

MatrixC remap_quadratic(const MatrixC& src, const std::vector<int>& map, int n_modes) {
    MatrixC out = MatrixC::Zero(n_modes, n_modes);
    for (int i = 0; i < src.rows(); ++i)
        for (int j = 0; j < src.cols(); ++j) out(map[i], map[j]) += src(i, j);
    return out;
}

VectorC remap_vector(const VectorC& src, const std::vector<int>& map, int n_modes) {
    VectorC out = VectorC::Zero(n_modes);
    for (int i = 0; i < src.size(); ++i) out(map[i]) += src(i);
    return out;
}

// Hermitian/linear parts of Im(X) for the operator-valued bilinear
//   X = (C_l a + d_l)^dag W (C_r a + d_r),
// the correction term shared by the series and feedback rules. Quadratic part
// (M - M^dag)/2i with M = C_l^dag W C_r; linear part (u - v)/2i with
// u = C_l^dag W d_r and v = C_r^dag W^dag d_l.
void accumulate_im_bilinear(const MatrixC& c_left, const VectorC& d_left, const MatrixC& w,
                            const MatrixC& c_right, const VectorC& d_right, MatrixC& quad,
                            VectorC& lin) {
    const Complex half_over_i(0.0, -0.5);  // 1/(2i)
    const MatrixC m = c_left.adjoint() * w * c_right;
    quad += half_over_i * (m - m.adjoint());
    const VectorC u = c_left.adjoint() * (w * d_right);
    const VectorC v = c_right.adjoint() * (w.adjoint() * d_left);
    lin += half_over_i * (u - v);
}

}  // namespace

LinearSLH::LinearSLH(MatrixC scattering, MatrixC coupling, VectorC coupling_offset,
                     MatrixC hamiltonian_quadratic, VectorC hamiltonian_linear,
                     std::vector<ModeInfo> modes)
    : scattering_(std::move(scattering)),
      coupling_(std::move(coupling)),
      coupling_offset_(std::move(coupling_offset)),
      hamiltonian_quadratic_(std::move(hamiltonian_quadratic)),
      hamiltonian_linear_(std::move(hamiltonian_linear)),
      modes_(std::move(modes)) {
    const int p = static_cast<int>(scattering_.rows());
    const int m = static_cast<int>(hamiltonian_quadratic_.rows());
    if (scattering_.cols() != p) throw slh_error("scattering matrix must be square");
    if (coupling_.rows() != p || coupling_.cols() != m)
        throw slh_error("coupling matrix has inconsistent shape");
    if (coupling_offset_.size() != p) throw slh_error("coupling offset has wrong length");
    if (hamiltonian_quadratic_.cols() != m || hamiltonian_linear_.size() != m)
        throw slh_error("Hamiltonian blocks have inconsistent shape");
    if (static_cast<int>(modes_.size()) != m) throw slh_error("mode list has wrong length");
    for (std::size_t i = 0; i < modes_.size(); ++i)
        for (std::size_t j = i + 1; j < modes_.size(); ++j)
            if (modes_[i].label == modes_[j].label)
                throw slh_error("duplicate mode label '" + modes_[i].label + "'");
    if (!scattering_unitary(kValidateTol)) throw slh_error("scattering matrix is not unitary");
    if (!hamiltonian_hermitian(kValidateTol))
        throw slh_error("quadratic Hamiltonian is not Hermitian");
}

LinearSLH LinearSLH::identity(int n_ports) {
    if (n_ports < 0) throw slh_error("negative port count");
    return LinearSLH(MatrixC::Identity(n_ports, n_ports), MatrixC::Zero(n_ports, 0),
                     VectorC::Zero(n_ports), MatrixC::Zero(0, 0), VectorC::Zero(0), {});
}

int LinearSLH::mode_index(const std::string& label) const {
    for (std::size_t i = 0; i < modes_.size(); ++i)
        if (modes_[i].label == label) return static_cast<int>(i);
    return -1;
}

MatrixC LinearSLH::dynamics_matrix() const {
    const Complex i(0.0, 1.0);
    return -i * hamiltonian_quadratic_ - 0.5 * (coupling_.adjoint() * coupling_);
}

VectorC LinearSLH::drive_vector() const {
    const Complex half_i(0.0, 0.5);
    return hamiltonian_linear_ - half_i * (coupling_.adjoint() * coupling_offset_);
}

bool LinearSLH::scattering_unitary(double tol) const {
    if (ports() == 0) return true;
    const MatrixC delta =
        scattering_.adjoint() * scattering_ - MatrixC::Identity(ports(), ports());
    return delta.cwiseAbs().maxCoeff() <= tol;
}

bool LinearSLH::hamiltonian_hermitian(double tol) const {
    if (modes() == 0) return true;
    const MatrixC delta = hamiltonian_quadratic_ - hamiltonian_quadratic_.adjoint();
    return delta.cwiseAbs().maxCoeff() <= tol;
}

LinearSLH make_phase(double phi) {
    if (!std::isfinite(phi)) throw std::invalid_argument("phase must be finite");
    MatrixC s(1, 1);
    s(0, 0) = std::exp(Complex(0.0, phi));
    return LinearSLH(s, MatrixC::Zero(1, 0), VectorC::Zero(1), MatrixC::Zero(0, 0),
                     VectorC::Zero(0), {});
}

LinearSLH make_cavity_port(double kappa_e, double detuning, Direction direction,
                           std::string mode_label) {
    if (!(kappa_e >= 0.0)) throw std::invalid_argument("kappa_e must be non-negative");
    if (!std::isfinite(detuning)) throw std::invalid_argument("detuning must be finite");
    MatrixC s = MatrixC::Identity(1, 1);
    MatrixC c(1, 1);
    c(0, 0) = std::sqrt(kappa_e / 2.0);
    MatrixC a(1, 1);
    a(0, 0) = direction == Direction::right ? detuning : 0.0;
    return LinearSLH(s, c, VectorC::Zero(1), a, VectorC::Zero(1),
                     {ModeInfo{std::move(mode_label), detuning}});
}

LinearSLH make_probe(Complex alpha) {
    VectorC d(1);
    d(0) = alpha;
    return LinearSLH(MatrixC::Identity(1, 1), MatrixC::Zero(1, 0), d, MatrixC::Zero(0, 0),
                     VectorC::Zero(0), {});
}

LinearSLH series(const LinearSLH& downstream, const LinearSLH& upstream) {
    if (downstream.ports() != upstream.ports())
        throw slh_error("series requires equal port counts");

    std::vector<int> map_up, map_down;
    std::vector<ModeInfo> modes =
        merge_modes(upstream.mode_info(), downstream.mode_info(), map_up, map_down);
    const int n = static_cast<int>(modes.size());

    const MatrixC c1 = remap_columns(upstream.coupling(), map_up, n);
    const MatrixC c2 = remap_columns(downstream.coupling(), map_down, n);
    const VectorC& d1 = upstream.coupling_offset();
    const VectorC& d2 = downstream.coupling_offset();
    const MatrixC& s1 = upstream.scattering();
    const MatrixC& s2 = downstream.scattering();

    MatrixC quad = remap_quadratic(upstream.hamiltonian_quadratic(), map_up, n) +
                   remap_quadratic(downstream.hamiltonian_quadratic(), map_down, n);
    VectorC lin = remap_vector(upstream.hamiltonian_linear(), map_up, n) +
                  remap_vector(downstream.hamiltonian_linear(), map_down, n);
    accumulate_im_bilinear(c2, d2, s2, c1, d1, quad, lin);

    return LinearSLH(s2 * s1, c2 + s2 * c1, d2 + s2 * d1, std::move(quad), std::move(lin),
                     std::move(modes));
}

LinearSLH concatenate(const LinearSLH& a, const LinearSLH& b) {
    std::vector<int> map_a, map_b;
    std::vector<ModeInfo> modes = merge_modes(a.mode_info(), b.mode_info(), map_a, map_b);
    const int n = static_cast<int>(modes.size());
    const int pa = a.ports();
    const int pb = b.ports();

    MatrixC s = MatrixC::Zero(pa + pb, pa + pb);
    s.topLeftCorner(pa, pa) = a.scattering();
    s.bottomRightCorner(pb, pb) = b.scattering();

    MatrixC c = MatrixC::Zero(pa + pb, n);
    c.topRows(pa) = remap_columns(a.coupling(), map_a, n);
    c.bottomRows(pb) = remap_columns(b.coupling(), map_b, n);

    VectorC d(pa + pb);
    d.head(pa) = a.coupling_offset();
    d.tail(pb) = b.coupling_offset();

    MatrixC quad = remap_quadratic(a.hamiltonian_quadratic(), map_a, n) +
                   remap_quadratic(b.hamiltonian_quadratic(), map_b, n);
    VectorC lin = remap_vector(a.hamiltonian_linear(), map_a, n) +
                  remap_vector(b.hamiltonian_linear(), map_b, n);

    return LinearSLH(std::move(s), std::move(c), std::move(d), std::move(quad), std::move(lin),
                     std::move(modes));
}

LinearSLH feedback(const LinearSLH& g, int out_port, int in_port) {
    const int p = g.ports();
    if (out_port < 0 || out_port >= p || in_port < 0 || in_port >= p)
        throw slh_error("feedback port index out of range");

    const MatrixC& s = g.scattering();
    const Complex loop = s(out_port, in_port);
    if (std::abs(1.0 - loop) <= 1e-9)
        throw singular_loop_error("feedback loop is singular: |1 - S(out,in)| <= 1e-9");
    const Complex x = 1.0 / (1.0 - loop);

    std::vector<int> keep_rows, keep_cols;
    for (int i = 0; i < p; ++i) {
        if (i != out_port) keep_rows.push_back(i);
        if (i != in_port) keep_cols.push_back(i);
    }
    const int q = p - 1;

    MatrixC s_red(q, q);
    MatrixC c_red(q, g.modes());
    VectorC d_red(q);
    for (int r = 0; r < q; ++r) {
        const int i = keep_rows[r];
        const Complex gain = s(i, in_port) * x;
        for (int cidx = 0; cidx < q; ++cidx)
            s_red(r, cidx) = s(i, keep_cols[cidx]) + gain * s(out_port, keep_cols[cidx]);
        c_red.row(r) = g.coupling().row(i) + gain * g.coupling().row(out_port);
        d_red(r) = g.coupling_offset()(i) + gain * g.coupling_offset()(out_port);
    }

    // H correction Im( L^dag S(:,in) x L_out ) runs over all rows of L,
    // including the eliminated one.
    MatrixC quad = g.hamiltonian_quadratic();
    VectorC lin = g.hamiltonian_linear();
    const MatrixC w = s.col(in_port) * x;  // p x 1
    accumulate_im_bilinear(g.coupling(), g.coupling_offset(), w,
                           g.coupling().row(out_port), g.coupling_offset().row(out_port), quad,
                           lin);

    std::vector<ModeInfo> modes = g.mode_info();
    return LinearSLH(std::move(s_red), std::move(c_red), std::move(d_red), std::move(quad),
                     std::move(lin), std::move(modes));
}

}  // namespace cavnet
