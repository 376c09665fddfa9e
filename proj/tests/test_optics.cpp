#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "belldisc/optics.hpp"
#include "test_support.hpp"

using namespace belldisc;
using Catch::Matchers::WithinAbs;
using testsupport::random_mesh_params;
using testsupport::uniform;

namespace {
constexpr double kInvSqrt2 = 0.7071067811865476;

double max_dev(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    return (a - b).cwiseAbs().maxCoeff();
}
}  // namespace

TEST_CASE("beam_splitter_unitary") {
    SECTION("full transmission is the identity") {
        const auto u = beam_splitter_unitary({1, 3, 1.0, 0.0}, 4);
        REQUIRE(max_dev(u.matrix(), Eigen::MatrixXcd::Identity(4, 4)) < 1e-15);
    }
    SECTION("50/50 splitter on modes (1,3)") {
        const auto u = beam_splitter_unitary({1, 3, kInvSqrt2, 0.0}, 4);
        REQUIRE_THAT(u.matrix()(0, 0).real(), WithinAbs(kInvSqrt2, 1e-15));
        REQUIRE_THAT(u.matrix()(0, 2).real(), WithinAbs(kInvSqrt2, 1e-15));
        REQUIRE_THAT(u.matrix()(2, 0).real(), WithinAbs(-kInvSqrt2, 1e-15));
        REQUIRE_THAT(u.matrix()(2, 2).real(), WithinAbs(kInvSqrt2, 1e-15));
        REQUIRE_THAT(u.matrix()(1, 1).real(), WithinAbs(1.0, 1e-15));
    }
    SECTION("eta = cos(pi/8) block on modes (2,4)") {
        const auto u = beam_splitter_unitary({2, 4, std::cos(M_PI / 8.0), 0.0}, 4);
        REQUIRE_THAT(u.matrix()(1, 1).real(), WithinAbs(0.9238795325112867, 1e-15));
        REQUIRE_THAT(u.matrix()(1, 3).real(), WithinAbs(0.3826834323650898, 1e-15));
        REQUIRE_THAT(u.matrix()(3, 1).real(), WithinAbs(-0.3826834323650898, 1e-15));
        REQUIRE_THAT(u.matrix()(3, 3).real(), WithinAbs(0.9238795325112867, 1e-15));
    }
    SECTION("validation") {
        REQUIRE_THROWS_AS(beam_splitter_unitary({1, 5, 0.5, 0.0}, 4), std::out_of_range);
        REQUIRE_THROWS_AS(beam_splitter_unitary({1, 2, 1.5, 0.0}, 4),
                          std::invalid_argument);
        REQUIRE_THROWS_AS(beam_splitter_unitary({2, 2, 0.5, 0.0}, 4),
                          std::invalid_argument);
    }
}

TEST_CASE("phase_shifter") {
    REQUIRE(max_dev(phase_shifter(1, 0.0, 4).matrix(),
                    Eigen::MatrixXcd::Identity(4, 4)) < 1e-15);
    const auto pi_shift = phase_shifter(2, M_PI, 4);
    REQUIRE_THAT(pi_shift.matrix()(1, 1).real(), WithinAbs(-1.0, 1e-15));
    const auto half = phase_shifter(1, M_PI / 2.0, 4);
    REQUIRE_THAT(half.matrix()(0, 0).imag(), WithinAbs(1.0, 1e-15));
    REQUIRE_THAT(half.matrix()(0, 0).real(), WithinAbs(0.0, 1e-15));
    REQUIRE_THROWS_AS(phase_shifter(0, 1.0, 4), std::out_of_range);
}

TEST_CASE("compose") {
    SECTION("identities") {
        const auto id = ModeUnitary::identity(4);
        REQUIRE(max_dev(compose({id, id}).matrix(), id.matrix()) < 1e-15);
    }
    SECTION("a splitter followed by its inverse") {
        const auto bs = beam_splitter_unitary({1, 3, kInvSqrt2, 0.3}, 4);
        REQUIRE(max_dev(compose({bs, bs.adjoint()}).matrix(),
                        Eigen::MatrixXcd::Identity(4, 4)) < 1e-12);
    }
    SECTION("two parallel splitters give the block matrix") {
        const double phi = M_PI / 8.0;
        const auto u = two_splitter_network(kInvSqrt2, phi);
        Eigen::Matrix4cd expect = Eigen::Matrix4cd::Zero();
        expect(0, 0) = kInvSqrt2;
        expect(0, 2) = kInvSqrt2;
        expect(2, 0) = -kInvSqrt2;
        expect(2, 2) = kInvSqrt2;
        expect(1, 1) = std::cos(phi);
        expect(1, 3) = std::sin(phi);
        expect(3, 1) = -std::sin(phi);
        expect(3, 3) = std::cos(phi);
        REQUIRE(max_dev(u.matrix(), expect) < 1e-15);
    }
    SECTION("first listed acts first") {
        const auto a = beam_splitter_unitary({1, 2, 0.6, 0.0}, 4);
        const auto b = phase_shifter(1, 0.7, 4);
        REQUIRE(max_dev(compose({a, b}).matrix(), b.matrix() * a.matrix()) < 1e-15);
    }
    SECTION("associative") {
        std::mt19937_64 eng(5);
        for (int trial = 0; trial < 20; ++trial) {
            const auto a = mesh_unitary(random_mesh_params(eng));
            const auto b = mesh_unitary(random_mesh_params(eng));
            const auto c = mesh_unitary(random_mesh_params(eng));
            const auto ab_c = compose({compose({a, b}), c});
            const auto a_bc = compose({a, compose({b, c})});
            REQUIRE(max_dev(ab_c.matrix(), a_bc.matrix()) < 1e-12);
        }
    }
    SECTION("dimension mismatch") {
        REQUIRE_THROWS_AS(
            compose({ModeUnitary::identity(4), ModeUnitary::identity(5)}),
            std::invalid_argument);
    }
}

TEST_CASE("optimal_discrimination_unitary") {
    SECTION("Bell point conjugate transpose") {
        const auto u = optimal_discrimination_unitary(BellLikeFamily::bell());
        Eigen::Matrix4cd udag = Eigen::Matrix4cd::Zero();
        udag(0, 0) = kInvSqrt2;
        udag(0, 2) = -kInvSqrt2;
        udag(1, 1) = kInvSqrt2;
        udag(1, 3) = -kInvSqrt2;
        udag(2, 0) = kInvSqrt2;
        udag(2, 2) = kInvSqrt2;
        udag(3, 1) = kInvSqrt2;
        udag(3, 3) = kInvSqrt2;
        REQUIRE(max_dev(u.matrix().adjoint(), udag) < 1e-15);
    }
    SECTION("separable second pair") {
        const auto u =
            optimal_discrimination_unitary(BellLikeFamily(1.0, 0.0, 0.0, 1.0));
        const Eigen::Matrix4cd udag = u.matrix().adjoint();
        REQUIRE_THAT(udag(1, 1).real(), WithinAbs(1.0, 1e-15));
        REQUIRE_THAT(std::abs(udag(1, 0)) + std::abs(udag(1, 2)) + std::abs(udag(1, 3)),
                     WithinAbs(0.0, 1e-15));
    }
    SECTION("theta2 = pi/6 second row") {
        const auto u = optimal_discrimination_unitary(
            BellLikeFamily::from_angles(0.4, M_PI / 6.0));
        const Eigen::Matrix4cd udag = u.matrix().adjoint();
        REQUIRE_THAT(udag(1, 1).real(), WithinAbs(0.8660254037844386, 1e-15));
        REQUIRE_THAT(udag(1, 3).real(), WithinAbs(-0.5, 1e-15));
    }
    SECTION("does not depend on the first pair") {
        const auto a = optimal_discrimination_unitary(
            BellLikeFamily::from_angles(0.1, M_PI / 8.0));
        const auto b = optimal_discrimination_unitary(
            BellLikeFamily::from_angles(1.2, M_PI / 8.0));
        REQUIRE(max_dev(a.matrix(), b.matrix()) < 1e-15);
    }
    SECTION("matches the two-splitter network for real families") {
        std::mt19937_64 eng(9);
        for (int trial = 0; trial < 20; ++trial) {
            const double t2 = uniform(eng, 0.0, M_PI / 2.0);
            const auto u = optimal_discrimination_unitary(
                BellLikeFamily::from_angles(0.3, t2));
            REQUIRE(max_dev(u.matrix(), two_splitter_network(kInvSqrt2, t2).matrix()) <
                    1e-12);
        }
    }
    SECTION("unitary for complex parameters, including beta2 = 0") {
        std::mt19937_64 eng(13);
        for (int trial = 0; trial < 50; ++trial) {
            const auto u =
                optimal_discrimination_unitary(testsupport::random_family(eng));
            REQUIRE(u.is_unitary(1e-12));
        }
        REQUIRE(optimal_discrimination_unitary(BellLikeFamily(0.6, 0.8, 1.0, 0.0))
                    .is_unitary(1e-12));
    }
}

TEST_CASE("every constructor yields a unitary matrix") {
    std::mt19937_64 eng(77);
    for (int trial = 0; trial < 100; ++trial) {
        const int dim = 4 + static_cast<int>(eng() % 5);
        const int a = 1 + static_cast<int>(eng() % static_cast<unsigned>(dim));
        int b = 1 + static_cast<int>(eng() % static_cast<unsigned>(dim));
        if (b == a) b = (a % dim) + 1;
        const auto bs = beam_splitter_unitary(
            {a, b, uniform(eng, 0.0, 1.0), uniform(eng, -M_PI, M_PI)}, dim);
        REQUIRE(bs.is_unitary(1e-10));
        const auto ps = phase_shifter(a, uniform(eng, -M_PI, M_PI), dim);
        REQUIRE(ps.is_unitary(1e-10));
        REQUIRE(mesh_unitary(random_mesh_params(eng)).is_unitary(1e-10));
    }
}

TEST_CASE("mesh_unitary") {
    SECTION("all parameters zero gives the identity") {
        REQUIRE(max_dev(mesh_unitary(NetworkParams{}).matrix(),
                        Eigen::MatrixXcd::Identity(4, 4)) < 1e-15);
    }
    SECTION("single (1,3) rotation of pi/4 is the 50/50 splitter") {
        NetworkParams p;
        p.angles[1] = M_PI / 4.0;  // pair order (1,2),(1,3),(1,4),(2,3),(2,4),(3,4)
        REQUIRE(max_dev(mesh_unitary(p).matrix(),
                        beam_splitter_unitary({1, 3, kInvSqrt2, 0.0}, 4).matrix()) <
                1e-15);
    }
    SECTION("decomposing the discrimination unitary round-trips") {
        const auto u = optimal_discrimination_unitary(
            BellLikeFamily::from_angles(0.2, M_PI / 6.0));
        const auto dec = mesh_decompose(u);
        REQUIRE(max_dev(mesh_unitary(dec.params).matrix(), u.matrix()) < 1e-10);
        // the two-splitter structure appears directly in the parameters
        REQUIRE_THAT(dec.params.angles[1], WithinAbs(M_PI / 4.0, 1e-12));
        REQUIRE_THAT(dec.params.angles[4], WithinAbs(M_PI / 6.0, 1e-12));
    }
    SECTION("random mesh members round-trip to 1e-8") {
        std::mt19937_64 eng(101);
        for (int trial = 0; trial < 100; ++trial) {
            const auto params = random_mesh_params(eng);
            const auto u = mesh_unitary(params);
            const auto dec = mesh_decompose(u);
            REQUIRE(max_dev(mesh_unitary(dec.params).matrix(), u.matrix()) < 1e-8);
            REQUIRE((dec.residual - Eigen::Vector4cd::Ones()).cwiseAbs().maxCoeff() <
                    1e-8);
        }
    }
}
