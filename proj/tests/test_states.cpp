#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "belldisc/states.hpp"
#include "test_support.hpp"

using namespace belldisc;
using Catch::Matchers::WithinAbs;
using testsupport::random_family;
using testsupport::random_state;
using testsupport::uniform;

namespace {
constexpr double kInvSqrt2 = 0.7071067811865476;
}

TEST_CASE("bell_like_states reproduces the defining coefficient placement") {
    SECTION("Bell point gives the four Bell states, pairwise orthogonal") {
        const auto states = bell_like_states(BellLikeFamily::bell());
        REQUIRE_THAT(std::abs(states[0].amp(1, 3) - kInvSqrt2), WithinAbs(0.0, 1e-15));
        REQUIRE_THAT(std::abs(states[0].amp(2, 4) - kInvSqrt2), WithinAbs(0.0, 1e-15));
        REQUIRE_THAT(std::abs(states[1].amp(1, 3) - kInvSqrt2), WithinAbs(0.0, 1e-15));
        REQUIRE_THAT(std::abs(states[1].amp(2, 4) + kInvSqrt2), WithinAbs(0.0, 1e-15));
        REQUIRE_THAT(std::abs(states[2].amp(1, 4) - kInvSqrt2), WithinAbs(0.0, 1e-15));
        REQUIRE_THAT(std::abs(states[2].amp(2, 3) - kInvSqrt2), WithinAbs(0.0, 1e-15));
        REQUIRE_THAT(std::abs(states[3].amp(1, 4) - kInvSqrt2), WithinAbs(0.0, 1e-15));
        REQUIRE_THAT(std::abs(states[3].amp(2, 3) + kInvSqrt2), WithinAbs(0.0, 1e-15));
        for (int i = 0; i < 4; ++i)
            for (int j = i + 1; j < 4; ++j)
                REQUIRE_THAT(std::abs(inner_product(states[i], states[j])),
                             WithinAbs(0.0, 1e-12));
    }

    SECTION("theta = 0 yields the product basis up to sign") {
        const auto states = bell_like_states(BellLikeFamily::from_angles(0.0, 0.0));
        // sin 0 = 0: Psi1 = |11>, Psi2 = |00>, Psi3 = |10>, Psi4 = |01>
        REQUIRE_THAT(std::abs(states[0].amp(2, 4)) , WithinAbs(1.0, 1e-15));
        REQUIRE_THAT(std::abs(states[1].amp(1, 3)) , WithinAbs(1.0, 1e-15));
        REQUIRE_THAT(std::abs(states[2].amp(2, 3)) , WithinAbs(1.0, 1e-15));
        REQUIRE_THAT(std::abs(states[3].amp(1, 4)) , WithinAbs(1.0, 1e-15));
    }

    SECTION("theta1 = pi/6, theta2 = pi/8") {
        const auto states =
            bell_like_states(BellLikeFamily::from_angles(M_PI / 6.0, M_PI / 8.0));
        REQUIRE_THAT(states[0].amp(1, 3).real(), WithinAbs(0.5, 1e-15));
        REQUIRE_THAT(states[0].amp(2, 4).real(),
                     WithinAbs(0.8660254037844386, 1e-15));
        REQUIRE_THAT(std::abs(states[0].amp(1, 4)), WithinAbs(0.0, 1e-15));
        REQUIRE_THAT(std::abs(states[0].amp(2, 3)), WithinAbs(0.0, 1e-15));
    }

    SECTION("non-normalized parameters are rejected") {
        REQUIRE_THROWS_AS(BellLikeFamily(0.5, 0.5, 0.5, 0.5), std::invalid_argument);
        REQUIRE_THROWS_AS(BellLikeFamily::from_angles(-0.1, 0.2), std::invalid_argument);
        REQUIRE_THROWS_AS(BellLikeFamily::from_angles(0.1, 2.0), std::invalid_argument);
    }
}

TEST_CASE("orthonormality holds for every valid family") {
    std::mt19937_64 eng(42);
    for (int trial = 0; trial < 100; ++trial) {
        const auto states = bell_like_states(random_family(eng));
        for (int i = 0; i < 4; ++i) {
            REQUIRE_THAT(std::abs(inner_product(states[i], states[i]) - 1.0),
                         WithinAbs(0.0, 1e-12));
            for (int j = i + 1; j < 4; ++j)
                REQUIRE_THAT(std::abs(inner_product(states[i], states[j])),
                             WithinAbs(0.0, 1e-12));
        }
    }
}

TEST_CASE("concurrence") {
    SECTION("Bell state has concurrence 1") {
        const auto states = bell_like_states(BellLikeFamily::bell());
        REQUIRE_THAT(concurrence(states[0]), WithinAbs(1.0, 1e-12));
    }
    SECTION("product state has concurrence 0") {
        REQUIRE_THAT(concurrence(TwoPhotonState(1.0, 0.0, 0.0, 0.0)),
                     WithinAbs(0.0, 1e-15));
    }
    SECTION("theta1 = pi/6 gives sin(pi/3)") {
        const auto states =
            bell_like_states(BellLikeFamily::from_angles(M_PI / 6.0, M_PI / 8.0));
        REQUIRE_THAT(concurrence(states[0]), WithinAbs(0.8660254037844386, 1e-12));
    }
    SECTION("equals sin(2 theta) for all four states") {
        std::mt19937_64 eng(7);
        for (int trial = 0; trial < 50; ++trial) {
            const double t1 = uniform(eng, 0.0, M_PI / 2.0);
            const double t2 = uniform(eng, 0.0, M_PI / 2.0);
            const auto states = bell_like_states(BellLikeFamily::from_angles(t1, t2));
            REQUIRE_THAT(concurrence(states[0]), WithinAbs(std::sin(2.0 * t1), 1e-12));
            REQUIRE_THAT(concurrence(states[1]), WithinAbs(std::sin(2.0 * t1), 1e-12));
            REQUIRE_THAT(concurrence(states[2]), WithinAbs(std::sin(2.0 * t2), 1e-12));
            REQUIRE_THAT(concurrence(states[3]), WithinAbs(std::sin(2.0 * t2), 1e-12));
        }
    }
    SECTION("invariant under a global phase") {
        std::mt19937_64 eng(11);
        for (int trial = 0; trial < 50; ++trial) {
            const auto s = random_state(eng);
            const Complex phase = testsupport::random_phase(eng);
            std::array<Complex, 4> rotated = s.coeffs();
            for (auto& c : rotated) c *= phase;
            REQUIRE_THAT(concurrence(TwoPhotonState(rotated)),
                         WithinAbs(concurrence(s), 1e-12));
        }
    }
    SECTION("rejects non-normalized states") {
        REQUIRE_THROWS_AS(concurrence(TwoPhotonState(1.0, 1.0, 0.0, 0.0)),
                          std::invalid_argument);
    }
}

TEST_CASE("coefficient_matrix") {
    SECTION("|00> has a single nonzero entry") {
        const auto a = coefficient_matrix(TwoPhotonState(1.0, 0.0, 0.0, 0.0));
        REQUIRE_THAT(std::abs(a(0, 0) - 1.0), WithinAbs(0.0, 1e-15));
        REQUIRE_THAT(std::abs(a(0, 1)) + std::abs(a(1, 0)) + std::abs(a(1, 1)),
                     WithinAbs(0.0, 1e-15));
    }
    SECTION("Bell Psi1 is diagonal 1/sqrt2") {
        const auto a =
            coefficient_matrix(bell_like_states(BellLikeFamily::bell())[0]);
        REQUIRE_THAT(std::abs(a(0, 0) - kInvSqrt2), WithinAbs(0.0, 1e-15));
        REQUIRE_THAT(std::abs(a(1, 1) - kInvSqrt2), WithinAbs(0.0, 1e-15));
        REQUIRE_THAT(std::abs(a(0, 1)) + std::abs(a(1, 0)), WithinAbs(0.0, 1e-15));
    }
    SECTION("Psi3 at theta2 = pi/6") {
        const auto a = coefficient_matrix(
            bell_like_states(BellLikeFamily::from_angles(0.3, M_PI / 6.0))[2]);
        REQUIRE_THAT(a(0, 1).real(), WithinAbs(0.5, 1e-15));
        REQUIRE_THAT(a(1, 0).real(), WithinAbs(0.8660254037844386, 1e-15));
        REQUIRE_THAT(std::abs(a(0, 0)) + std::abs(a(1, 1)), WithinAbs(0.0, 1e-15));
    }
    SECTION("is linear in the state") {
        std::mt19937_64 eng(23);
        for (int trial = 0; trial < 50; ++trial) {
            const auto e = random_state(eng);
            const auto f = random_state(eng);
            const Complex x(uniform(eng, -1.0, 1.0), uniform(eng, -1.0, 1.0));
            const Complex y(uniform(eng, -1.0, 1.0), uniform(eng, -1.0, 1.0));
            std::array<Complex, 4> combo{};
            for (std::size_t i = 0; i < 4; ++i)
                combo[i] = x * e.coeffs()[i] + y * f.coeffs()[i];
            const Eigen::Matrix2cd lhs = coefficient_matrix(TwoPhotonState(combo));
            const Eigen::Matrix2cd rhs =
                x * coefficient_matrix(e) + y * coefficient_matrix(f);
            REQUIRE((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
        }
    }
}

TEST_CASE("inner_product") {
    const auto family = BellLikeFamily::from_angles(M_PI / 6.0, M_PI / 8.0);
    const auto states = bell_like_states(family);
    SECTION("construction is orthonormal") {
        REQUIRE_THAT(std::abs(inner_product(states[0], states[1])),
                     WithinAbs(0.0, 1e-15));
        REQUIRE_THAT(std::abs(inner_product(states[0], states[0]) - 1.0),
                     WithinAbs(0.0, 1e-15));
    }
    SECTION("overlap of Psi1 at two angles is cos of the difference") {
        const auto a = bell_like_states(BellLikeFamily::from_angles(M_PI / 6.0, 0.1))[0];
        const auto b = bell_like_states(BellLikeFamily::from_angles(M_PI / 4.0, 0.1))[0];
        REQUIRE_THAT(inner_product(a, b).real(),
                     WithinAbs(0.9659258262890683, 1e-12));
        REQUIRE_THAT(inner_product(a, b).imag(), WithinAbs(0.0, 1e-15));
    }
}
