// measures.hpp: Gaussian two-mode correlation measures
//
// States are handled in the scaled convention sigma = 2V/hbar (vacuum = identity)
// with interleaved ordering (x_1, p_1, x_2, p_2, ...).

#pragma once

#include <Eigen/Dense>

#include "heatchain/steady.hpp"

namespace heatchain {

struct TwoModeState {
    Eigen::Matrix4d sigma = Eigen::Matrix4d::Identity();

    double alpha() const { return sigma.topLeftCorner<2, 2>().determinant(); }
    double beta() const { return sigma.bottomRightCorner<2, 2>().determinant(); }
    double gamma() const { return sigma.topRightCorner<2, 2>().determinant(); }
    double delta() const { return sigma.determinant(); }
};

// The only conversion site from V (ordering x_L, x_C, x_R, p_L, p_C, p_R) to sigma.
TwoModeState reduce_two_mode(const Matrix6d& V, Site i, Site j, double hbar = 1.0);
TwoModeState reduce_two_mode(const CovarianceMatrix& cov, Site i, Site j, double hbar = 1.0);

// Interleaved scaled covariance of all three modes.
Matrix6d scaled_interleaved(const Matrix6d& V, double hbar = 1.0);

// Ascending symplectic eigenvalues; throws NonPhysical if sigma is not positive definite.
Eigen::VectorXd symplectic_eigenvalues(const Eigen::MatrixXd& sigma);

// max(0, -ln nu~_-) of the partial transpose Lambda = diag(1, 1, 1, -1).
double log_negativity(const TwoModeState& st);

struct SimonResult {
    double value = 0.0;    // C(x_i x_j) C(p_i p_j) - C(x_i p_j) C(p_i x_j), V convention
    bool flag = false;     // value < 0
};
SimonResult simon_witness(const TwoModeState& st, double hbar = 1.0);

// ((x+1)/2) ln((x+1)/2) - ((x-1)/2) ln((x-1)/2)
double entropy_function(double nu);
double von_neumann_entropy(const Eigen::MatrixXd& sigma);

// Discord with the Gaussian measurement on the second mode; the left variant
// measures the first mode.
double gaussian_discord_right(const TwoModeState& st);
double gaussian_discord_left(const TwoModeState& st);

// Minimal det of the first mode's conditional covariance over Gaussian
// measurements on the second mode (closed form).
double discord_emin(double alpha, double beta, double gamma, double delta);

}  // namespace heatchain
