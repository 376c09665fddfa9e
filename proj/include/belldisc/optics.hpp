#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "belldisc/states.hpp"

namespace belldisc {

/// Max-entry tolerance for the unitarity invariant U†U = I.
inline constexpr double kUnitaryTol = 1e-10;

/// An m-mode linear-optical network, described by the unitary relating
/// output to input creation operators: b†_i = sum_j U_ij a†_j.
class ModeUnitary {
public:
    explicit ModeUnitary(Eigen::MatrixXcd u) : u_(std::move(u)) {
        if (u_.rows() != u_.cols())
            throw std::invalid_argument("ModeUnitary: matrix must be square");
        if (u_.rows() < 4)
            throw std::invalid_argument("ModeUnitary: dim must be >= 4");
    }

    /// Constructs from an externally supplied matrix, enforcing U†U = I.
    static ModeUnitary checked(Eigen::MatrixXcd u, double tol = kUnitaryTol) {
        ModeUnitary m(std::move(u));
        if (!m.is_unitary(tol))
            throw std::invalid_argument(
                "ModeUnitary::checked: U†U = I violated beyond tolerance");
        return m;
    }

    int dim() const { return static_cast<int>(u_.rows()); }
    const Eigen::MatrixXcd& matrix() const { return u_; }

    bool is_unitary(double tol = kUnitaryTol) const {
        const Eigen::MatrixXcd d =
            u_.adjoint() * u_ - Eigen::MatrixXcd::Identity(u_.rows(), u_.cols());
        return d.cwiseAbs().maxCoeff() <= tol;
    }

    ModeUnitary adjoint() const { return ModeUnitary(u_.adjoint()); }

    static ModeUnitary identity(int dim) {
        return ModeUnitary(Eigen::MatrixXcd::Identity(dim, dim));
    }

private:
    Eigen::MatrixXcd u_;
};

/// Beam splitter between two modes with transmissivity amplitude eta in
/// [0,1] and coupling phase in radians (phase = 0 gives the real
/// convention used throughout).
struct BeamSplitter {
    int mode_a = 1;
    int mode_b = 2;
    double eta = 1.0;
    double phase = 0.0;
};

namespace detail {
inline void require_mode(int mode, int dim, const char* who) {
    if (mode < 1 || mode > dim)
        throw std::out_of_range(std::string(who) + ": mode index out of range 1..dim");
}
}  // namespace detail

/// Embeds the 2x2 block
///   [  eta                 sqrt(1-eta^2) e^{+i phase} ]
///   [ -sqrt(1-eta^2) e^{-i phase}        eta          ]
/// on (mode_a, mode_b) into a dim x dim identity.
inline ModeUnitary beam_splitter_unitary(const BeamSplitter& bs, int dim) {
    detail::require_mode(bs.mode_a, dim, "beam_splitter_unitary");
    detail::require_mode(bs.mode_b, dim, "beam_splitter_unitary");
    if (bs.mode_a == bs.mode_b)
        throw std::invalid_argument("beam_splitter_unitary: modes must be distinct");
    if (bs.eta < 0.0 || bs.eta > 1.0)
        throw std::invalid_argument("beam_splitter_unitary: eta must lie in [0,1]");
    Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(dim, dim);
    const double r = std::sqrt(std::max(0.0, 1.0 - bs.eta * bs.eta));
    const Complex off = r * std::exp(Complex(0.0, bs.phase));
    const int a = bs.mode_a - 1, b = bs.mode_b - 1;
    u(a, a) = bs.eta;
    u(a, b) = off;
    u(b, a) = -std::conj(off);
    u(b, b) = bs.eta;
    return ModeUnitary(std::move(u));
}

/// Diagonal unitary with e^{i phase} on the given mode, 1 elsewhere.
inline ModeUnitary phase_shifter(int mode, double phase, int dim) {
    detail::require_mode(mode, dim, "phase_shifter");
    Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(dim, dim);
    u(mode - 1, mode - 1) = std::exp(Complex(0.0, phase));
    return ModeUnitary(std::move(u));
}

/// Chains network elements; the first listed element acts first on the
/// input modes, so the result is the matrix product of the elements in
/// reverse list order.
inline ModeUnitary compose(const std::vector<ModeUnitary>& elements) {
    if (elements.empty()) throw std::invalid_argument("compose: empty element list");
    const int dim = elements.front().dim();
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Identity(dim, dim);
    for (const auto& e : elements) {
        if (e.dim() != dim)
            throw std::invalid_argument("compose: dimension mismatch between elements");
        acc = e.matrix() * acc;
    }
    return ModeUnitary(std::move(acc));
}

/// The two-beam-splitter layout: a splitter with transmissivity eta1 on
/// modes (1,3) in parallel with one of transmissivity cos(phi) on (2,4).
inline ModeUnitary two_splitter_network(double eta1, double phi) {
    return compose({beam_splitter_unitary({1, 3, eta1, 0.0}, 4),
                    beam_splitter_unitary({2, 4, std::cos(phi), 0.0}, 4)});
}

/// The unitary that unambiguously identifies |Psi3> via detectors (1,2)
/// and |Psi4> via (1,4). Emitted directly as the conjugate transpose of
///   U† = [ 1/sqrt2   0        -1/sqrt2   0       ]
///        [ 0         beta2     0        -alpha2  ]
///        [ 1/sqrt2   0         1/sqrt2   0       ]
///        [ 0         alpha2*   0         beta2*  ]
/// which is unitary for every normalized (alpha2, beta2), including
/// beta2 = 0. For the real family it coincides with the two-splitter
/// network at eta1 = 1/sqrt2, phi = theta2.
inline ModeUnitary optimal_discrimination_unitary(const BellLikeFamily& f) {
    const double r = 1.0 / std::sqrt(2.0);
    const Complex a2 = f.alpha2(), b2 = f.beta2();
    Eigen::Matrix4cd udag = Eigen::Matrix4cd::Zero();
    udag(0, 0) = r;
    udag(0, 2) = -r;
    udag(1, 1) = b2;
    udag(1, 3) = -a2;
    udag(2, 0) = r;
    udag(2, 2) = r;
    udag(3, 1) = std::conj(a2);
    udag(3, 3) = std::conj(b2);
    return ModeUnitary(udag.adjoint());
}

/// Fixed pair ordering of the triangular mesh; entry i couples the listed
/// modes with rotation angle angles[i] and phase phases[i].
inline constexpr std::array<std::pair<int, int>, 6> kMeshPairs = {
    {{1, 2}, {1, 3}, {1, 4}, {2, 3}, {2, 4}, {3, 4}}};

/// 12 real parameters for an arbitrary 4-mode network: one two-mode
/// rotation per pair in kMeshPairs order. Rotation i is the beam-splitter
/// block with eta = cos(angles[i]) and coupling phase phases[i].
struct NetworkParams {
    std::array<double, 6> angles{};
    std::array<double, 6> phases{};
};

/// Composes the six rotations in kMeshPairs order (first pair acts first).
/// Every U(4) element equals such a product up to a diagonal of output
/// phases, which cancel in all detection probabilities.
inline ModeUnitary mesh_unitary(const NetworkParams& p) {
    Eigen::Matrix4cd acc = Eigen::Matrix4cd::Identity();
    for (std::size_t i = 0; i < kMeshPairs.size(); ++i) {
        const auto [a, b] = kMeshPairs[i];
        const double c = std::cos(p.angles[i]);
        const double s = std::sin(p.angles[i]);
        const Complex off = s * std::exp(Complex(0.0, p.phases[i]));
        Eigen::Matrix4cd t = Eigen::Matrix4cd::Identity();
        t(a - 1, a - 1) = c;
        t(a - 1, b - 1) = off;
        t(b - 1, a - 1) = -std::conj(off);
        t(b - 1, b - 1) = c;
        acc = t * acc;
    }
    return ModeUnitary(acc);
}

struct MeshDecomposition {
    NetworkParams params;
    /// Residual diagonal after stripping all six rotations; identity when
    /// the input lies in the mesh image.
    Eigen::Vector4cd residual;
};

/// Inverts mesh_unitary by Givens-style nulling: rotations are stripped
/// from the right in kMeshPairs order, each one zeroing the next
/// off-diagonal entry of the working matrix. Exact (up to roundoff) for
/// matrices in the mesh image; general unitaries additionally leave a
/// diagonal of phases in `residual`.
inline MeshDecomposition mesh_decompose(const ModeUnitary& u) {
    if (u.dim() != 4)
        throw std::invalid_argument("mesh_decompose: dim must be 4");
    MeshDecomposition out;
    Eigen::Matrix4cd v = u.matrix();
    for (std::size_t i = 0; i < kMeshPairs.size(); ++i) {
        const auto [a, b] = kMeshPairs[i];
        const int r = a - 1;  // row whose (r,b) entry is nulled
        const Complex num = v(r, b - 1);
        const Complex den = v(r, a - 1);
        const double angle = std::atan2(std::abs(num), std::abs(den));
        const double phase =
            (std::abs(num) == 0.0) ? 0.0 : std::arg(num) - std::arg(den);
        out.params.angles[i] = angle;
        out.params.phases[i] = phase;
        const double c = std::cos(angle);
        const double s = std::sin(angle);
        const Complex off = s * std::exp(Complex(0.0, phase));
        Eigen::Matrix4cd t = Eigen::Matrix4cd::Identity();  // T† applied to columns
        t(a - 1, a - 1) = c;
        t(a - 1, b - 1) = -off;
        t(b - 1, a - 1) = std::conj(off);
        t(b - 1, b - 1) = c;
        v = v * t;
    }
    out.residual = v.diagonal();
    return out;
}

}  // namespace belldisc
