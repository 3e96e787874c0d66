#include <cmath>
#include <algorithm>
#include <numbers>
#include <random>

#include "doctest.h"
#include "heatchain/errors.hpp"
#include "heatchain/measures.hpp"
#include "gaussian_oracles.hpp"

using namespace heatchain;

using Eigen::MatrixXd;
using namespace oracle;

TEST_CASE("symplectic spectra of reference states") {
    for (double n : {0.0, 0.4, 3.0}) {
        const MatrixXd th = (2.0 * n + 1.0) * MatrixXd::Identity(4, 4);
        const Eigen::VectorXd nu = symplectic_eigenvalues(th);
        CHECK(nu(0) == doctest::Approx(2.0 * n + 1.0).epsilon(1e-13));
        CHECK(nu(1) == doctest::Approx(2.0 * n + 1.0).epsilon(1e-13));
    }
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        const MatrixXd S = random_symplectic(3, rng);
        CHECK((S * symplectic_form(3) * S.transpose() - symplectic_form(3)).cwiseAbs().maxCoeff() < 1e-9);
        const Eigen::VectorXd d = Eigen::Vector3d(1.3, 2.0, 5.5);
        MatrixXd D = MatrixXd::Zero(6, 6);
        for (int k = 0; k < 3; ++k) D(2 * k, 2 * k) = D(2 * k + 1, 2 * k + 1) = d(k);
        const Eigen::VectorXd nu = symplectic_eigenvalues(S * D * S.transpose());
        for (int k = 0; k < 3; ++k) CHECK(nu(k) == doctest::Approx(d(k)).epsilon(1e-8));
    }

    // direct sums
    MatrixXd ds = MatrixXd::Zero(4, 4);
    ds.topLeftCorner(2, 2) = Eigen::Vector2d(3.0, 1.0 / 3.0 * 4.0).asDiagonal();
    ds.bottomRightCorner(2, 2) = 1.7 * Eigen::Matrix2d::Identity();
    const Eigen::VectorXd nu = symplectic_eigenvalues(ds);
    CHECK(nu(0) == doctest::Approx(1.7).epsilon(1e-13));
    CHECK(nu(1) == doctest::Approx(2.0).epsilon(1e-13));

    CHECK_THROWS_AS(symplectic_eigenvalues(-MatrixXd::Identity(4, 4)), NonPhysical);
    CHECK_THROWS_AS(log_negativity(two_mode(0.5 * MatrixXd::Identity(4, 4))), NonPhysical);
}

TEST_CASE("logarithmic negativity") {
    for (double r : {0.0, 0.1, 0.5, 1.3}) CHECK(std::abs(log_negativity(tmsv(r)) - 2.0 * r) < 1e-12);

    // symmetric squeezed thermal: nu~_- = a - c
    for (auto [a, c] : {std::pair{2.0, 1.5}, std::pair{3.0, 1.0}, std::pair{1.5, 1.1}}) {
        MatrixXd s = a * MatrixXd::Identity(4, 4);
        s(0, 2) = s(2, 0) = c;
        s(1, 3) = s(3, 1) = -c;
        CHECK(std::abs(log_negativity(two_mode(s)) - std::max(0.0, -std::log(a - c))) < 1e-13);
    }

    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        const TwoModeState st = random_mixed(rng);
        const MatrixXd L = local_symplectic(2, 0, 0.7 * trial, 0.3) * local_symplectic(2, 1, -0.2 * trial, -0.5);
        const TwoModeState moved = two_mode(L * st.sigma * L.transpose());
        CHECK(std::abs(log_negativity(moved) - log_negativity(st)) < 1e-9);
        CHECK(log_negativity(st) >= 0.0);
    }
}

TEST_CASE("entropies and Schmidt symmetry") {
    CHECK(entropy_function(1.0) == 0.0);
    CHECK(entropy_function(3.0) == doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-15));
    CHECK_THROWS_AS(entropy_function(0.9), NonPhysical);
    for (double r : {0.2, 0.9}) {
        const TwoModeState st = tmsv(r);
        CHECK(von_neumann_entropy(st.sigma) < 1e-7);
        CHECK(von_neumann_entropy(st.sigma.topLeftCorner(2, 2)) ==
              doctest::Approx(entropy_function(std::cosh(2.0 * r))).epsilon(1e-12));
    }
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 10; ++trial) {
        const MatrixXd S = random_symplectic(3, rng);
        const MatrixXd pure = S * S.transpose();
        const double sa = von_neumann_entropy(pure.topLeftCorner(2, 2));
        const double sbc = von_neumann_entropy(pure.bottomRightCorner(4, 4));
        CHECK(std::abs(sa - sbc) < 1e-7);
        const Eigen::VectorXd nu = symplectic_eigenvalues(pure);
        CHECK((nu.array() - 1.0).abs().maxCoeff() < 1e-8);
    }
}

TEST_CASE("Simon witness") {
    MatrixXd prod = MatrixXd::Zero(4, 4);
    prod.topLeftCorner(2, 2) << 2.0, 0.3, 0.3, 1.0;
    prod.bottomRightCorner(2, 2) = 1.4 * Eigen::Matrix2d::Identity();
    const SimonResult p = simon_witness(two_mode(prod));
    CHECK(p.value == 0.0);
    CHECK_FALSE(p.flag);

    const double r = 0.4;
    const SimonResult t = simon_witness(tmsv(r));
    CHECK(t.value == doctest::Approx(-0.25 * std::sinh(2.0 * r) * std::sinh(2.0 * r)).epsilon(1e-13));
    CHECK(t.flag);
    CHECK(simon_witness(tmsv(r), 2.0).value == doctest::Approx(4.0 * t.value).epsilon(1e-13));
}

TEST_CASE("Gaussian discord") {
    MatrixXd prod = MatrixXd::Zero(4, 4);
    prod.topLeftCorner(2, 2) << 2.0, 0.3, 0.3, 1.0;
    prod.bottomRightCorner(2, 2) << 1.5, -0.2, -0.2, 3.0;
    CHECK(gaussian_discord_right(two_mode(prod)) < 1e-14);
    CHECK(gaussian_discord_left(two_mode(prod)) < 1e-14);

    // pure states: discord equals the entanglement entropy. Both branches of the
    // closed form take a square root of a quantity that vanishes for pure states,
    // so only about half the digits survive.
    for (double r : {0.3, 1.0}) {
        const double e = entropy_function(std::cosh(2.0 * r));
        CHECK(std::abs(gaussian_discord_right(tmsv(r)) - e) < 2e-6);
        CHECK(std::abs(gaussian_discord_left(tmsv(r)) - e) < 2e-6);
    }

    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 12; ++trial) {
        const TwoModeState st = random_mixed(rng);
        const double closed = gaussian_discord_right(st);
        const double brute = discord_bruteforce(st);
        CAPTURE(trial);
        CHECK(std::abs(closed - brute) < 1e-6);
        CHECK(closed >= 0.0);
        // local symplectic invariance
        const MatrixXd L = local_symplectic(2, 0, 0.4, -0.3) * local_symplectic(2, 1, 1.1, 0.6);
        CHECK(std::abs(gaussian_discord_right(two_mode(L * st.sigma * L.transpose())) - closed) < 1e-7 * std::max(1.0, closed));
    }

    // reduce_two_mode picks the pair out of the interleaved scaled matrix
    Matrix6d V = Matrix6d::Identity() * 0.5;
    V(0, 2) = V(2, 0) = 0.1;
    V(3, 5) = V(5, 3) = -0.1;
    V(0, 5) = V(5, 0) = 0.03;
    const TwoModeState lr = reduce_two_mode(V, L, R);
    const Matrix6d full = scaled_interleaved(V);
    Eigen::Matrix4d expected;
    expected << full.block<2, 2>(0, 0), full.block<2, 2>(0, 4), full.block<2, 2>(4, 0), full.block<2, 2>(4, 4);
    CHECK((lr.sigma - expected).cwiseAbs().maxCoeff() == 0.0);
    CHECK(lr.sigma(0, 2) == doctest::Approx(0.2));
    CHECK(lr.sigma(0, 3) == doctest::Approx(0.06));
    CHECK(reduce_two_mode(V, R, L).sigma(2, 1) == doctest::Approx(0.06));
    CHECK_THROWS_AS(reduce_two_mode(V, C, C), std::invalid_argument);
}
