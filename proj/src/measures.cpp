// measures.cpp: symplectic spectra, negativity, Simon witness and discord

#include "heatchain/measures.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "heatchain/errors.hpp"

namespace heatchain {

namespace {

constexpr double physical_floor = 1e-6;

Eigen::MatrixXd symplectic_form(Eigen::Index modes) {
    Eigen::MatrixXd W = Eigen::MatrixXd::Zero(2 * modes, 2 * modes);
    for (Eigen::Index k = 0; k < modes; ++k) {
        W(2 * k, 2 * k + 1) = 1.0;
        W(2 * k + 1, 2 * k) = -1.0;
    }
    return W;
}

void require_physical(const Eigen::VectorXd& nu, const char* who) {
    if (nu.minCoeff() < 1.0 - physical_floor)
        throw NonPhysical(std::string(who) + ": symplectic eigenvalue " + std::to_string(nu.minCoeff()) + " < 1");
}

TwoModeState swapped(const TwoModeState& st) {
    Eigen::Matrix4d P = Eigen::Matrix4d::Zero();
    P(0, 2) = P(1, 3) = P(2, 0) = P(3, 1) = 1.0;
    return {P * st.sigma * P.transpose()};
}

}  // namespace

Matrix6d scaled_interleaved(const Matrix6d& V, double hbar) {
    Matrix6d s;
    for (int a = 0; a < 6; ++a) {
        const int ia = (a % 2 == 0) ? a / 2 : 3 + a / 2;
        for (int b = 0; b < 6; ++b) {
            const int ib = (b % 2 == 0) ? b / 2 : 3 + b / 2;
            s(a, b) = 2.0 * V(ia, ib) / hbar;
        }
    }
    return s;
}

TwoModeState reduce_two_mode(const Matrix6d& V, Site i, Site j, double hbar) {
    if (i == j) throw std::invalid_argument("reduce_two_mode needs two distinct modes");
    const std::array<Op, 4> ops{position(i), momentum(i), position(j), momentum(j)};
    TwoModeState st;
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) st.sigma(a, b) = 2.0 * V(index(ops[a]), index(ops[b])) / hbar;
    return st;
}

TwoModeState reduce_two_mode(const CovarianceMatrix& cov, Site i, Site j, double hbar) {
    return reduce_two_mode(cov.V, i, j, hbar);
}

Eigen::VectorXd symplectic_eigenvalues(const Eigen::MatrixXd& sigma) {
    if (sigma.rows() != sigma.cols() || sigma.rows() % 2 != 0)
        throw std::invalid_argument("sigma must be a square matrix of even size");
    const Eigen::MatrixXd sym = 0.5 * (sigma + sigma.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
    if (es.eigenvalues().minCoeff() <= 0.0) throw NonPhysical("covariance matrix is not positive definite");
    const Eigen::MatrixXd root = es.operatorSqrt();
    const Eigen::Index n = sigma.rows() / 2;
    // i * S W S is Hermitian with eigenvalues +-nu_k.
    const Eigen::MatrixXd anti = root * symplectic_form(n) * root;
    const Eigen::MatrixXcd H = std::complex<double>(0.0, 1.0) * anti.cast<std::complex<double>>();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> hs(H, Eigen::EigenvaluesOnly);
    Eigen::VectorXd nu = hs.eigenvalues().tail(n);
    std::sort(nu.data(), nu.data() + n);
    return nu;
}

double log_negativity(const TwoModeState& st) {
    require_physical(symplectic_eigenvalues(st.sigma), "log_negativity");
    const Eigen::Vector4d lambda(1.0, 1.0, 1.0, -1.0);
    const Eigen::Matrix4d pt = lambda.asDiagonal() * st.sigma * lambda.asDiagonal();
    const double nu_minus = symplectic_eigenvalues(pt)(0);
    return std::max(0.0, -std::log(nu_minus));
}

SimonResult simon_witness(const TwoModeState& st, double hbar) {
    const double q = 0.5 * hbar;
    const Eigen::Matrix2d c = st.sigma.topRightCorner<2, 2>() * q;
    SimonResult r;
    r.value = c(0, 0) * c(1, 1) - c(0, 1) * c(1, 0);
    r.flag = r.value < 0.0;
    return r;
}

double entropy_function(double nu) {
    if (nu < 1.0 - physical_floor) throw NonPhysical("entropy of a symplectic eigenvalue below 1");
    if (nu <= 1.0) return 0.0;
    const double up = 0.5 * (nu + 1.0);
    const double down = 0.5 * (nu - 1.0);
    return up * std::log(up) - down * std::log(down);
}

double von_neumann_entropy(const Eigen::MatrixXd& sigma) {
    const Eigen::VectorXd nu = symplectic_eigenvalues(sigma);
    double s = 0.0;
    for (Eigen::Index k = 0; k < nu.size(); ++k) s += entropy_function(nu(k));
    return s;
}

double discord_emin(double alpha, double beta, double gamma, double delta) {
    const double g2 = gamma * gamma;
    const double lhs = (delta - alpha * beta) * (delta - alpha * beta);
    const double rhs = (1.0 + beta) * g2 * (alpha + delta);
    if (lhs <= rhs) {
        const double bm = beta - 1.0;
        if (bm < 1e-12) return alpha;  // pure measured mode: the state is a product
        const double inner = std::max(0.0, g2 + bm * (delta - alpha));
        return (2.0 * g2 + bm * (delta - alpha) + 2.0 * std::abs(gamma) * std::sqrt(inner)) / (bm * bm);
    }
    const double disc = std::max(0.0, g2 * g2 + lhs - 2.0 * g2 * (alpha * beta + delta));
    return (alpha * beta - g2 + delta - std::sqrt(disc)) / (2.0 * beta);
}

double gaussian_discord_right(const TwoModeState& st) {
    const Eigen::VectorXd nu = symplectic_eigenvalues(st.sigma);
    require_physical(nu, "gaussian_discord");
    const double emin = discord_emin(st.alpha(), st.beta(), st.gamma(), st.delta());
    const double d = entropy_function(std::sqrt(std::max(1.0, st.beta()))) - entropy_function(std::max(1.0, nu(1))) -
                     entropy_function(std::max(1.0, nu(0))) + entropy_function(std::sqrt(std::max(1.0, emin)));
    if (d < -1e-9) throw NumericalError("discord evaluated to " + std::to_string(d));
    return std::max(0.0, d);
}

double gaussian_discord_left(const TwoModeState& st) { return gaussian_discord_right(swapped(st)); }

}  // namespace heatchain
