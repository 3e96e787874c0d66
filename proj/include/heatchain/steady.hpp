// steady.hpp: Green matrix, noise spectra, two-time correlators and covariance

#pragma once

#include <map>
#include <shared_mutex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "heatchain/model.hpp"
#include "heatchain/quadrature.hpp"
#include "json.hpp"

namespace heatchain {

// Phase-space operators in covariance ordering (x_L, x_C, x_R, p_L, p_C, p_R).
enum class Op : int { xL = 0, xC = 1, xR = 2, pL = 3, pC = 4, pR = 5 };

inline Op position(Site s) { return static_cast<Op>(static_cast<int>(s)); }
inline Op momentum(Site s) { return static_cast<Op>(static_cast<int>(s) + 3); }
inline int index(Op a) { return static_cast<int>(a); }
std::string op_name(Op a);

using Matrix6d = Eigen::Matrix<double, 6, 6>;

Eigen::Matrix3cd green_matrix(const SystemConfig& cfg, double omega);

// w * coth(w / 2T), with its Taylor form near w = 0.
double omega_coth(double omega, double temperature);

// D_C(w) = Im chi(w) coth(w/2T) cosh(2r) and D_Y(w) = Im chi(w).
double noise_symmetric(const BathConfig& b, double mass, double omega);
double noise_commutator(const BathConfig& b, double mass, double omega);

struct StationarityReport {
    bool passed = true;
    bool cutoff_ok = true;
    double cutoff_margin = 0.0;  // min_i omega_c_i / sqrt(omega_i^2 + k/m)
    bool potential_positive = true;
    double min_potential_eigenvalue = 0.0;
    double min_abs_det = 0.0;
    double min_relative_width = 0.0;  // min over modes of width / frequency
    std::vector<std::string> warnings;
    std::vector<std::string> violations;

    nlohmann::json to_json() const;
};

StationarityReport stationarity_check(const SystemConfig& cfg);

// All equal-lag correlators at one lag tau:
//   C(a, b) = (1/2) <{a(tau), b(0)}>,   y(a, b) with (1/2) <[a(tau), b(0)]> = i y(a, b).
struct CorrelationBlock {
    double tau = 0.0;
    Matrix6d C = Matrix6d::Zero();
    Matrix6d y = Matrix6d::Zero();
    double error = 0.0;            // largest quadrature error estimate over all entries
    double imaginary_residue = 0.0;
    std::size_t panels = 0;
    std::size_t evaluations = 0;

    double c(Op a, Op b) const { return C(index(a), index(b)); }
    double commutator(Op a, Op b) const { return y(index(a), index(b)); }
};

// Computes one block with a single vector-valued integration.
CorrelationBlock compute_block(const SystemConfig& cfg, double tau, const PeakSet& peaks,
                               const QuadratureSpec& spec);

struct CovarianceMatrix {
    Matrix6d V = Matrix6d::Zero();
    double error = 0.0;
    double min_uncertainty_eigenvalue = 0.0;  // of 2V/hbar + i sigma_symp
    double max_abs_xp_diagonal = 0.0;         // max_i |C(x_i, p_i)|

    double operator()(Op a, Op b) const { return V(index(a), index(b)); }
};

// Minimum eigenvalue of 2V + i*Omega for V in (x..., p...) ordering.
double uncertainty_min_eigenvalue(const Eigen::MatrixXd& V);

QuadratureSpec default_quadrature(const SystemConfig& cfg);

// Stationary state of one configuration with memoized correlation blocks.
// Safe for concurrent use.
class SteadyState {
public:
    explicit SteadyState(const SystemConfig& cfg);
    SteadyState(const SystemConfig& cfg, const QuadratureSpec& spec);

    const SystemConfig& config() const { return cfg_; }
    const StationarityReport& stationarity() const { return report_; }
    const PeakSet& peaks() const { return peaks_; }
    const QuadratureSpec& quadrature() const { return spec_; }

    CorrelationBlock block(double tau) const;
    double correlator(Op a, Op b, double tau) const;
    double commutator_correlator(Op a, Op b, double tau) const;
    CovarianceMatrix covariance() const;

private:
    SystemConfig cfg_;
    QuadratureSpec spec_;
    StationarityReport report_;
    PeakSet peaks_;
    mutable std::shared_mutex mutex_;
    mutable std::map<double, CorrelationBlock> cache_;
};

double correlator(const SystemConfig& cfg, Op a, Op b, double tau);
double commutator_correlator(const SystemConfig& cfg, Op a, Op b, double tau);
CovarianceMatrix covariance(const SystemConfig& cfg);

}  // namespace heatchain
