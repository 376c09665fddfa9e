#pragma once

#include <cassert>
#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "belldisc/optics.hpp"
#include "belldisc/states.hpp"

namespace belldisc {

/// Tolerance for a full outcome distribution summing to 1.
inline constexpr double kDistributionTol = 1e-10;

/// Unordered two-photon detection outcome: one photon in detector m and
/// one in detector n, stored canonically with m <= n (m == n means both
/// photons in the same detector).
struct DetectionEvent {
    int m = 1;
    int n = 1;

    DetectionEvent(int a, int b) : m(a < b ? a : b), n(a < b ? b : a) {
        if (m < 1) throw std::out_of_range("DetectionEvent: modes start at 1");
    }

    bool same_mode() const { return m == n; }

    friend bool operator==(const DetectionEvent& a, const DetectionEvent& b) {
        return a.m == b.m && a.n == b.n;
    }
    friend bool operator<(const DetectionEvent& a, const DetectionEvent& b) {
        return a.m != b.m ? a.m < b.m : a.n < b.n;
    }
};

namespace detail {

inline void require_detection_dim(int dim, const char* who) {
    if (dim < 4 || dim > 8)
        throw std::invalid_argument(std::string(who) + ": supported dim range is 4..8");
}

inline int event_index(const DetectionEvent& ev, int dim) {
    if (ev.n > dim) throw std::out_of_range("event index out of range for dim");
    return (ev.m - 1) * (dim + 1) - (ev.m - 1) * ev.m / 2 + (ev.n - ev.m);
}

}  // namespace detail

/// Probability of every unordered two-photon detection event on dim
/// detectors, in lexicographic (m,n) order.
class OutcomeDistribution {
public:
    explicit OutcomeDistribution(int dim)
        : dim_(dim), probs_(static_cast<std::size_t>(event_count(dim)), 0.0) {
        detail::require_detection_dim(dim, "OutcomeDistribution");
    }

    static int event_count(int dim) { return dim * (dim + 1) / 2; }

    int dim() const { return dim_; }

    double prob(const DetectionEvent& ev) const {
        return probs_[static_cast<std::size_t>(detail::event_index(ev, dim_))];
    }
    double prob(int m, int n) const { return prob(DetectionEvent(m, n)); }

    double& at(const DetectionEvent& ev) {
        return probs_[static_cast<std::size_t>(detail::event_index(ev, dim_))];
    }

    double total() const {
        double s = 0.0;
        for (double p : probs_) s += p;
        return s;
    }

    /// Events in lexicographic order, paired with their probabilities.
    std::vector<std::pair<DetectionEvent, double>> sorted_events() const {
        std::vector<std::pair<DetectionEvent, double>> out;
        out.reserve(probs_.size());
        for (int m = 1; m <= dim_; ++m)
            for (int n = m; n <= dim_; ++n)
                out.emplace_back(DetectionEvent(m, n), prob(m, n));
        return out;
    }

private:
    int dim_;
    std::vector<double> probs_;
};

using PiMatrix = Eigen::MatrixXcd;

/// The symmetric embedding pi(|e>) = N + N^T: the dim x dim matrix with
/// the coefficient block A_e in rows {1,2} x columns {3,4}, its transpose
/// mirrored below, and zeros elsewhere (zero padding for dim > 4).
inline PiMatrix pi_map(const TwoPhotonState& e, int dim) {
    if (dim < 4) throw std::invalid_argument("pi_map: dim must be >= 4");
    PiMatrix pi = PiMatrix::Zero(dim, dim);
    const Eigen::Matrix2cd a = coefficient_matrix(e);
    pi.block<2, 2>(0, 2) = a;
    pi.block<2, 2>(2, 0) = a.transpose();
    return pi;
}

namespace detail {

/// phi*_m, the m-th column of U† (the conjugated m-th row of U).
inline Eigen::VectorXcd phi_star_column(const ModeUnitary& u, int m) {
    return u.matrix().row(m - 1).conjugate().transpose();
}

/// <phi_n| M |phi*_m> for any dim x dim matrix M.
inline Complex bilinear(const Eigen::MatrixXcd& M, const ModeUnitary& u, int n, int m) {
    const Eigen::VectorXcd pn = phi_star_column(u, n);
    const Eigen::VectorXcd pm = phi_star_column(u, m);
    return pn.transpose() * M * pm;
}

/// N, the strictly upper coefficient matrix (no symmetrization).
inline Eigen::MatrixXcd n_matrix(const TwoPhotonState& e, int dim) {
    Eigen::MatrixXcd n = Eigen::MatrixXcd::Zero(dim, dim);
    n.block<2, 2>(0, 2) = coefficient_matrix(e);
    return n;
}

}  // namespace detail

/// Detection probability of a single event:
///   m == n:  (1/2) |<phi_m| (N + N^T) |phi*_m>|^2
///   m != n:  |<phi_n| (N + N^T) |phi*_m>|^2
/// The same-detector branch also evaluates 2 |<phi_m| N |phi*_m>|^2 and
/// asserts the two forms agree; they coincide because N + N^T is the
/// symmetrization of N.
inline double event_probability(const TwoPhotonState& e, const ModeUnitary& u,
                                const DetectionEvent& ev) {
    const int dim = u.dim();
    detail::require_detection_dim(dim, "event_probability");
    if (ev.n > dim) throw std::out_of_range("event_probability: event out of range");
    e.require_normalized("event_probability");
    const PiMatrix pi = pi_map(e, dim);
    const Complex amp = detail::bilinear(pi, u, ev.n, ev.m);
    if (ev.same_mode()) {
        const double p = 0.5 * std::norm(amp);
        const Complex amp_n = detail::bilinear(detail::n_matrix(e, dim), u, ev.m, ev.m);
        const double p_direct = 2.0 * std::norm(amp_n);
        if (std::abs(p - p_direct) > 1e-10)
            throw std::logic_error(
                "event_probability: symmetrized and direct same-mode forms disagree");
        return p;
    }
    return std::norm(amp);
}

/// All dim(dim+1)/2 event probabilities via the matrix formulas. Throws
/// if the total deviates from 1 beyond tolerance.
inline OutcomeDistribution outcome_distribution(const TwoPhotonState& e,
                                                const ModeUnitary& u) {
    const int dim = u.dim();
    detail::require_detection_dim(dim, "outcome_distribution");
    e.require_normalized("outcome_distribution");
    OutcomeDistribution dist(dim);
    const PiMatrix pi = pi_map(e, dim);
    std::vector<Eigen::VectorXcd> cols;
    cols.reserve(static_cast<std::size_t>(dim));
    for (int m = 1; m <= dim; ++m) cols.push_back(detail::phi_star_column(u, m));
    for (int m = 1; m <= dim; ++m) {
        const Eigen::VectorXcd pim = pi * cols[static_cast<std::size_t>(m - 1)];
        for (int n = m; n <= dim; ++n) {
            const Complex amp = cols[static_cast<std::size_t>(n - 1)].transpose() * pim;
            dist.at(DetectionEvent(m, n)) =
                (m == n) ? 0.5 * std::norm(amp) : std::norm(amp);
        }
    }
    if (std::abs(dist.total() - 1.0) > kDistributionTol)
        throw std::logic_error(
            "outcome_distribution: probabilities do not sum to 1 (invariant violated)");
    return dist;
}

/// Independent oracle: substitutes a†_j = sum_l U*_lj b†_l, expands the
/// degree-2 polynomial in the output operators, collects the coefficient
/// of each monomial, and squares magnitudes (with the sqrt(2) factor from
/// b†^2 |0> = sqrt(2) |2>). Never touches the N / pi machinery above.
inline OutcomeDistribution brute_force_distribution(const TwoPhotonState& e,
                                                    const ModeUnitary& u) {
    const int dim = u.dim();
    detail::require_detection_dim(dim, "brute_force_distribution");
    e.require_normalized("brute_force_distribution");
    const Eigen::MatrixXcd& mat = u.matrix();

    // monomial coefficients c[(l,n)] of b†_l b†_n, l <= n
    std::vector<Complex> coeff(static_cast<std::size_t>(OutcomeDistribution::event_count(dim)),
                               Complex(0.0, 0.0));
    for (int j = 1; j <= 2; ++j) {
        for (int k = 3; k <= 4; ++k) {
            const Complex a_jk = e.amp(j, k);
            if (a_jk == Complex(0.0, 0.0)) continue;
            for (int l = 1; l <= dim; ++l) {
                const Complex ulj = std::conj(mat(l - 1, j - 1));
                if (ulj == Complex(0.0, 0.0)) continue;
                for (int n = 1; n <= dim; ++n) {
                    const Complex unk = std::conj(mat(n - 1, k - 1));
                    const DetectionEvent ev(l, n);
                    coeff[static_cast<std::size_t>(detail::event_index(ev, dim))] +=
                        a_jk * ulj * unk;
                }
            }
        }
    }

    OutcomeDistribution dist(dim);
    const double sqrt2 = std::sqrt(2.0);
    for (int m = 1; m <= dim; ++m) {
        for (int n = m; n <= dim; ++n) {
            const DetectionEvent ev(m, n);
            Complex amp = coeff[static_cast<std::size_t>(detail::event_index(ev, dim))];
            if (m == n) amp *= sqrt2;
            dist.at(ev) = std::norm(amp);
        }
    }
    if (std::abs(dist.total() - 1.0) > kDistributionTol)
        throw std::logic_error(
            "brute_force_distribution: probabilities do not sum to 1");
    return dist;
}

}  // namespace belldisc
