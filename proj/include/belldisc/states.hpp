#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace belldisc {

using Complex = std::complex<double>;

/// Absolute tolerance for all normalization checks.
inline constexpr double kNormTol = 1e-12;

/// One photon in modes {1,2} and one in modes {3,4} (dual-rail two-qubit
/// encoding). The state is |e> = sum_{j,k} alpha_jk a†_j a†_k |0> with
/// j in {1,2}, k in {3,4}; the four amplitudes are stored in the fixed
/// order (alpha_13, alpha_14, alpha_23, alpha_24).
class TwoPhotonState {
public:
    TwoPhotonState(Complex a13, Complex a14, Complex a23, Complex a24)
        : coeffs_{a13, a14, a23, a24} {}

    explicit TwoPhotonState(const std::array<Complex, 4>& coeffs) : coeffs_(coeffs) {}

    /// Amplitude alpha_jk for j in {1,2}, k in {3,4}.
    Complex amp(int j, int k) const {
        if (j < 1 || j > 2 || k < 3 || k > 4)
            throw std::out_of_range("TwoPhotonState::amp: j must be 1..2 and k 3..4");
        return coeffs_[static_cast<std::size_t>((j - 1) * 2 + (k - 3))];
    }

    const std::array<Complex, 4>& coeffs() const { return coeffs_; }

    /// sum |alpha_jk|^2
    double squared_norm() const {
        double s = 0.0;
        for (const auto& c : coeffs_) s += std::norm(c);
        return s;
    }

    bool is_normalized(double tol = kNormTol) const {
        return std::abs(squared_norm() - 1.0) <= tol;
    }

    /// Throws std::invalid_argument naming the violated invariant.
    void require_normalized(const char* who) const {
        if (!is_normalized())
            throw std::invalid_argument(std::string(who) +
                                        ": state violates sum |alpha_jk|^2 = 1");
    }

private:
    std::array<Complex, 4> coeffs_;
};

/// Parameters (alpha1, beta1, alpha2, beta2) of the four orthonormal
/// Bell-like states
///   |Psi1> = alpha1  a†_1 a†_3 + beta1   a†_2 a†_4
///   |Psi2> = beta1*  a†_1 a†_3 - alpha1* a†_2 a†_4
///   |Psi3> = alpha2  a†_1 a†_4 + beta2   a†_2 a†_3
///   |Psi4> = beta2*  a†_1 a†_4 - alpha2* a†_2 a†_3
/// with |alpha_i|^2 + |beta_i|^2 = 1. The real form uses
/// alpha_i = sin(theta_i), beta_i = cos(theta_i) with theta in [0, pi/2].
class BellLikeFamily {
public:
    BellLikeFamily(Complex alpha1, Complex beta1, Complex alpha2, Complex beta2)
        : alpha1_(alpha1), beta1_(beta1), alpha2_(alpha2), beta2_(beta2) {
        if (std::abs(std::norm(alpha1_) + std::norm(beta1_) - 1.0) > kNormTol)
            throw std::invalid_argument(
                "BellLikeFamily: |alpha1|^2 + |beta1|^2 = 1 violated");
        if (std::abs(std::norm(alpha2_) + std::norm(beta2_) - 1.0) > kNormTol)
            throw std::invalid_argument(
                "BellLikeFamily: |alpha2|^2 + |beta2|^2 = 1 violated");
    }

    /// Real-parameter form. Angles in radians, restricted to [0, pi/2] so
    /// the concurrence branch sin(2 theta) stays non-negative.
    static BellLikeFamily from_angles(double theta1, double theta2) {
        constexpr double half_pi = 1.5707963267948966;
        if (theta1 < 0.0 || theta1 > half_pi || theta2 < 0.0 || theta2 > half_pi)
            throw std::invalid_argument(
                "BellLikeFamily::from_angles: theta must lie in [0, pi/2]");
        return BellLikeFamily(std::sin(theta1), std::cos(theta1),
                              std::sin(theta2), std::cos(theta2));
    }

    static BellLikeFamily bell() {
        const double r = 1.0 / std::sqrt(2.0);
        return BellLikeFamily(r, r, r, r);
    }

    Complex alpha1() const { return alpha1_; }
    Complex beta1() const { return beta1_; }
    Complex alpha2() const { return alpha2_; }
    Complex beta2() const { return beta2_; }

private:
    Complex alpha1_, beta1_, alpha2_, beta2_;
};

/// The four Bell-like states in order |Psi1>..|Psi4>. Pairwise orthonormal
/// by construction.
inline std::array<TwoPhotonState, 4> bell_like_states(const BellLikeFamily& f) {
    const Complex z(0.0, 0.0);
    return {
        TwoPhotonState(f.alpha1(), z, z, f.beta1()),
        TwoPhotonState(std::conj(f.beta1()), z, z, -std::conj(f.alpha1())),
        TwoPhotonState(z, f.alpha2(), f.beta2(), z),
        TwoPhotonState(z, std::conj(f.beta2()), -std::conj(f.alpha2()), z),
    };
}

/// Hermitian inner product <a|b> on the four amplitudes (conjugate-linear
/// in the first argument).
inline Complex inner_product(const TwoPhotonState& a, const TwoPhotonState& b) {
    Complex s(0.0, 0.0);
    for (std::size_t i = 0; i < 4; ++i) s += std::conj(a.coeffs()[i]) * b.coeffs()[i];
    return s;
}

/// 2x2 coefficient matrix A_e with rows indexed by the {1,2} mode and
/// columns by the {3,4} mode:  A_e = [[alpha_13, alpha_14],
///                                    [alpha_23, alpha_24]].
inline Eigen::Matrix2cd coefficient_matrix(const TwoPhotonState& e) {
    Eigen::Matrix2cd a;
    a(0, 0) = e.amp(1, 3);
    a(0, 1) = e.amp(1, 4);
    a(1, 0) = e.amp(2, 3);
    a(1, 1) = e.amp(2, 4);
    return a;
}

/// Pure-state concurrence C = 2 |alpha_13 alpha_24 - alpha_14 alpha_23|
/// = 2 |det A_e|. For the real family this reduces to sin(2 theta).
inline double concurrence(const TwoPhotonState& e) {
    e.require_normalized("concurrence");
    const auto& c = e.coeffs();
    return 2.0 * std::abs(c[0] * c[3] - c[1] * c[2]);
}

}  // namespace belldisc
