#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "belldisc/detection.hpp"
#include "belldisc/optics.hpp"
#include "belldisc/states.hpp"

namespace belldisc {

/// Events with probability below this under the identified state are
/// treated as never firing and excluded from unambiguous discrimination.
inline constexpr double kNeverFiresTol = 1e-12;

inline constexpr std::array<double, 4> kUniformPriors = {0.25, 0.25, 0.25, 0.25};

/// Outcome distribution of each |Psi_i> under a common network, plus the
/// prior probability of each state being sent.
class ProbabilityTable {
public:
    ProbabilityTable(std::vector<OutcomeDistribution> rows, std::array<double, 4> priors)
        : rows_(std::move(rows)), priors_(priors) {
        if (rows_.size() != 4)
            throw std::invalid_argument("ProbabilityTable: exactly 4 rows required");
        const int d = rows_.front().dim();
        double ps = 0.0;
        for (double p : priors_) {
            if (p < 0.0) throw std::invalid_argument("ProbabilityTable: negative prior");
            ps += p;
        }
        if (std::abs(ps - 1.0) > kNormTol)
            throw std::invalid_argument("ProbabilityTable: priors must sum to 1");
        for (const auto& r : rows_) {
            if (r.dim() != d)
                throw std::invalid_argument("ProbabilityTable: row dimension mismatch");
            if (std::abs(r.total() - 1.0) > kDistributionTol)
                throw std::invalid_argument("ProbabilityTable: row does not sum to 1");
        }
    }

    int dim() const { return rows_.front().dim(); }
    /// Row for state index 1..4.
    const OutcomeDistribution& row(int state) const {
        if (state < 1 || state > 4)
            throw std::out_of_range("ProbabilityTable::row: state index 1..4");
        return rows_[static_cast<std::size_t>(state - 1)];
    }
    double prior(int state) const {
        if (state < 1 || state > 4)
            throw std::out_of_range("ProbabilityTable::prior: state index 1..4");
        return priors_[static_cast<std::size_t>(state - 1)];
    }
    const std::array<double, 4>& priors() const { return priors_; }

private:
    std::vector<OutcomeDistribution> rows_;
    std::array<double, 4> priors_;
};

inline ProbabilityTable probability_table(const BellLikeFamily& family,
                                          const ModeUnitary& u,
                                          const std::array<double, 4>& priors =
                                              kUniformPriors) {
    const auto states = bell_like_states(family);
    std::vector<OutcomeDistribution> rows;
    rows.reserve(4);
    for (const auto& s : states) rows.push_back(outcome_distribution(s, u));
    return ProbabilityTable(std::move(rows), priors);
}

/// Bayes confidence of an event: the largest posterior P(Psi_i | event)
/// and the 1-based index of the state achieving it.
struct Confidence {
    double value = 0.0;
    int state = 0;
};

/// Undefined (nullopt) when the event has zero probability under every
/// state, i.e. the Bayes denominator vanishes.
inline std::optional<Confidence> confidence(const ProbabilityTable& table,
                                            const DetectionEvent& ev) {
    double denom = 0.0;
    double best = -1.0;
    int best_state = 0;
    for (int i = 1; i <= 4; ++i) {
        const double joint = table.prior(i) * table.row(i).prob(ev);
        denom += joint;
        if (joint > best) {
            best = joint;
            best_state = i;
        }
    }
    if (denom == 0.0) return std::nullopt;
    return Confidence{best / denom, best_state};
}

struct ClosedFormConfidences {
    double d1 = 0.0;
    double d2 = 0.0;
    double d3 = 0.0;
};

/// The three confidence expressions of the two-splitter layout as
/// functions of the concurrences and the splitter angle phi:
///   D1 = (1 + sqrt(1 - C1^2)) / 2
///   D2 = (1 + |sqrt(1 - C2^2) cos 2phi + C2 sin 2phi|) / 2
///   D3 = (1 + |sqrt(1 - C2^2) cos 2phi - C2 sin 2phi|) / 2
/// For theta2 <= pi/4, D2 is the confidence of the event group
/// {(1,2),(1,4)} and D3 of {(2,3),(3,4)}; for theta2 > pi/4 (same C2)
/// the two groups swap.
inline ClosedFormConfidences closed_form_confidences(double c1, double c2, double phi) {
    if (c1 < 0.0 || c1 > 1.0 || c2 < 0.0 || c2 > 1.0)
        throw std::invalid_argument(
            "closed_form_confidences: concurrences must lie in [0,1]");
    const double s2 = std::sqrt(std::max(0.0, 1.0 - c2 * c2));
    const double co = std::cos(2.0 * phi);
    const double si = std::sin(2.0 * phi);
    return {(1.0 + std::sqrt(std::max(0.0, 1.0 - c1 * c1))) / 2.0,
            (1.0 + std::abs(s2 * co + c2 * si)) / 2.0,
            (1.0 + std::abs(s2 * co - c2 * si)) / 2.0};
}

namespace detail {
inline void require_epsilon(double eps, const char* who) {
    if (!(eps > 0.0) || eps > 0.1)
        throw std::invalid_argument(std::string(who) + ": epsilon must lie in (0, 0.1]");
}
}  // namespace detail

/// Events whose confidence reaches 1 - epsilon, with the identified state
/// (1-based). Events the identified state itself almost never produces
/// (probability below kNeverFiresTol) are excluded.
inline std::vector<std::pair<DetectionEvent, int>> unambiguous_events(
    const ProbabilityTable& table, double epsilon) {
    detail::require_epsilon(epsilon, "unambiguous_events");
    std::vector<std::pair<DetectionEvent, int>> out;
    const int d = table.dim();
    for (int m = 1; m <= d; ++m) {
        for (int n = m; n <= d; ++n) {
            const DetectionEvent ev(m, n);
            const auto conf = confidence(table, ev);
            if (!conf || conf->value < 1.0 - epsilon) continue;
            if (table.row(conf->state).prob(ev) < kNeverFiresTol) continue;
            out.emplace_back(ev, conf->state);
        }
    }
    return out;
}

/// Expected probability, over the priors, that the measurement produces
/// an unambiguous event identifying the sent state.
inline double success_probability(const ProbabilityTable& table, double epsilon) {
    detail::require_epsilon(epsilon, "success_probability");
    double s = 0.0;
    for (const auto& [ev, state] : unambiguous_events(table, epsilon))
        s += table.prior(state) * table.row(state).prob(ev);
    return s;
}

/// Per-event confidence summary.
struct ConfidenceEntry {
    DetectionEvent event;
    std::optional<double> confidence;  // absent when the Bayes denominator is 0
    int state = 0;                     // argmax state (1-based), valid when defined
    bool unambiguous = false;          // confidence within epsilon of 1 and fires
};

struct ConfidenceReport {
    double epsilon = 0.0;
    std::vector<ConfidenceEntry> entries;  // lexicographic event order
};

inline ConfidenceReport confidence_report(const ProbabilityTable& table, double epsilon) {
    detail::require_epsilon(epsilon, "confidence_report");
    ConfidenceReport rep;
    rep.epsilon = epsilon;
    const int d = table.dim();
    for (int m = 1; m <= d; ++m) {
        for (int n = m; n <= d; ++n) {
            const DetectionEvent ev(m, n);
            ConfidenceEntry entry{ev, std::nullopt, 0, false};
            if (const auto conf = confidence(table, ev)) {
                entry.confidence = conf->value;
                entry.state = conf->state;
                entry.unambiguous = conf->value >= 1.0 - epsilon &&
                                    table.row(conf->state).prob(ev) >= kNeverFiresTol;
            }
            rep.entries.push_back(entry);
        }
    }
    return rep;
}

/// Residuals of the unambiguous-discrimination conditions for detection
/// event (l,m) identifying `target`. vanish1/vanish2 are the amplitudes
/// of the two states living on the opposite coefficient pair, cross is
/// the amplitude of the target's partner state, and target_probability is
/// the event probability under the target itself.
struct ConstraintReport {
    double vanish1 = 0.0;
    double vanish2 = 0.0;
    double cross = 0.0;
    double target_probability = 0.0;
    bool pass = false;
};

/// Evaluates the unambiguity conditions directly on the unitary columns.
/// The residual tolerance is 1e-10; the non-vanishing condition requires
/// the target probability to clear kNeverFiresTol so that a passing pair
/// (l,m) is exactly an event unambiguous_events would report.
inline ConstraintReport check_unambiguous_constraints(const ModeUnitary& u,
                                                      const BellLikeFamily& family,
                                                      int l, int m, int target,
                                                      double tol = 1e-10) {
    detail::require_mode(l, u.dim(), "check_unambiguous_constraints");
    detail::require_mode(m, u.dim(), "check_unambiguous_constraints");
    if (target < 1 || target > 4)
        throw std::invalid_argument("check_unambiguous_constraints: target 1..4");

    // basis amplitudes g_jk = <phi_l| pi(a†_j a†_k |0>) |phi*_m>
    const int dim = u.dim();
    auto basis_amp = [&](int j, int k) {
        std::array<Complex, 4> c{};
        c[static_cast<std::size_t>((j - 1) * 2 + (k - 3))] = Complex(1.0, 0.0);
        return detail::bilinear(pi_map(TwoPhotonState(c), dim), u, l, m);
    };
    const Complex g00 = basis_amp(1, 3);
    const Complex g11 = basis_amp(2, 4);
    const Complex g01 = basis_amp(1, 4);
    const Complex g10 = basis_amp(2, 3);

    const std::array<Complex, 4> amps = {
        family.alpha1() * g00 + family.beta1() * g11,
        std::conj(family.beta1()) * g00 - std::conj(family.alpha1()) * g11,
        family.alpha2() * g01 + family.beta2() * g10,
        std::conj(family.beta2()) * g01 - std::conj(family.alpha2()) * g10,
    };

    const int partner[5] = {0, 2, 1, 4, 3};
    const int opposite_pair_first = (target <= 2) ? 3 : 1;

    ConstraintReport rep;
    rep.vanish1 = std::abs(amps[static_cast<std::size_t>(opposite_pair_first - 1)]);
    rep.vanish2 = std::abs(amps[static_cast<std::size_t>(opposite_pair_first)]);
    rep.cross = std::abs(amps[static_cast<std::size_t>(partner[target] - 1)]);
    const double target_amp_sq = std::norm(amps[static_cast<std::size_t>(target - 1)]);
    rep.target_probability = (l == m) ? 0.5 * target_amp_sq : target_amp_sq;
    rep.pass = rep.vanish1 <= tol && rep.vanish2 <= tol && rep.cross <= tol &&
               rep.target_probability >= kNeverFiresTol;
    return rep;
}

/// The m-th column of U† split as |u*> ⊕ |v*> ⊕ |w*| with block sizes
/// (2, 2, dim-4).
struct ColumnDecomposition {
    Eigen::Vector2cd u;
    Eigen::Vector2cd v;
    Eigen::VectorXcd w;
};

inline ColumnDecomposition column_decomposition(const ModeUnitary& u, int m) {
    detail::require_mode(m, u.dim(), "column_decomposition");
    const Eigen::VectorXcd col = detail::phi_star_column(u, m);
    ColumnDecomposition out;
    out.u = col.segment<2>(0);
    out.v = col.segment<2>(2);
    out.w = col.segment(4, u.dim() - 4);
    return out;
}

}  // namespace belldisc
