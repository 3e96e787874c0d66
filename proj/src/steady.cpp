// steady.cpp: spectral assembly of the stationary correlators

#include "heatchain/steady.hpp"

#include <cmath>
#include <complex>
#include <mutex>
#include <numbers>
#include <sstream>

#include "heatchain/errors.hpp"
#include "heatchain/spectral.hpp"

namespace heatchain {

namespace {

using cd = std::complex<double>;

// Layout of the integrand vector: [weight C|Y][power n][i][j][re|im].
constexpr int block_dim = 2 * 3 * 9 * 2;

constexpr int slot(int kind, int n, int i, int j) { return (((kind * 3 + n) * 3 + i) * 3 + j) * 2; }

struct ChainData {
    double mass;
    Eigen::Matrix3d U;
    std::array<Susceptibility, 3> sus;
    std::array<double, 3> stiffness;  // m (omega_i^2 + DOmega_i)
    std::array<BathConfig, 3> baths;
};

ChainData prepare(const SystemConfig& cfg) {
    ChainData d;
    d.mass = cfg.mass;
    d.U = coupling_matrix(cfg.coupling_k);
    for (int i = 0; i < 3; ++i) {
        d.sus[i] = Susceptibility::of(cfg.baths[i], cfg.mass);
        d.stiffness[i] = cfg.mass * (cfg.omega[i] * cfg.omega[i] + frequency_shift(cfg.baths[i]));
        d.baths[i] = cfg.baths[i];
    }
    return d;
}

Eigen::Matrix3cd dynamical_matrix(const ChainData& d, double w) {
    Eigen::Matrix3cd A = d.U.cast<cd>();
    for (int i = 0; i < 3; ++i) A(i, i) += -d.mass * w * w + d.stiffness[i] - chi(d.sus[i], w);
    return A;
}

double symmetric_weight(const BathConfig& b, const Susceptibility& s, double w) {
    return chi_imag_over_omega(s, w) * omega_coth(w, b.temperature) * std::cosh(2.0 * b.squeeze_r);
}

}  // namespace

std::string op_name(Op a) {
    static const char* names[] = {"x_L", "x_C", "x_R", "p_L", "p_C", "p_R"};
    return names[index(a)];
}

double omega_coth(double omega, double temperature) {
    const double x = omega / (2.0 * temperature);
    if (std::abs(x) < 1e-6) return 2.0 * temperature * (1.0 + x * x / 3.0);
    return omega / std::tanh(x);
}

double noise_symmetric(const BathConfig& b, double mass, double omega) {
    return symmetric_weight(b, Susceptibility::of(b, mass), omega);
}

double noise_commutator(const BathConfig& b, double mass, double omega) {
    return chi_imag(Susceptibility::of(b, mass), omega);
}

Eigen::Matrix3cd green_matrix(const SystemConfig& cfg, double omega) {
    const ChainData d = prepare(cfg);
    const Eigen::Matrix3cd A = dynamical_matrix(d, omega);
    const cd det = A.determinant();
    if (!(std::abs(det) > 0.0) || !std::isfinite(std::abs(det))) {
        std::ostringstream msg;
        msg << "Gamma + U is singular at w = " << omega;
        throw SingularMatrix(msg.str());
    }
    return A.inverse();
}

nlohmann::json StationarityReport::to_json() const {
    return {{"passed", passed},
            {"cutoff_ok", cutoff_ok},
            {"cutoff_margin", cutoff_margin},
            {"potential_positive", potential_positive},
            {"min_potential_eigenvalue", min_potential_eigenvalue},
            {"min_abs_det", min_abs_det},
            {"min_relative_width", min_relative_width},
            {"warnings", warnings},
            {"violations", violations}};
}

StationarityReport stationarity_check(const SystemConfig& cfg) {
    StationarityReport r;
    const double km = cfg.coupling_k / cfg.mass;

    r.cutoff_margin = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 3; ++i) {
        const double bound = std::sqrt(cfg.omega[i] * cfg.omega[i] + km);
        const double margin = cfg.baths[i].omega_c / bound;
        r.cutoff_margin = std::min(r.cutoff_margin, margin);
        std::ostringstream msg;
        msg.precision(6);
        if (margin <= 1.0) {
            msg << "bound mode: omega_c of bath " << site_name(static_cast<Site>(i)) << " (" << cfg.baths[i].omega_c
                << ") is below sqrt(omega^2 + k/m) = " << bound;
            r.violations.push_back(msg.str());
            r.cutoff_ok = false;
        } else if (margin < 5.0) {
            msg << "cutoff margin of bath " << site_name(static_cast<Site>(i)) << " is only " << margin
                << "x above sqrt(omega^2 + k/m)";
            r.warnings.push_back(msg.str());
        }
    }

    Eigen::Matrix3d K = coupling_matrix(cfg.coupling_k) / cfg.mass;
    for (int i = 0; i < 3; ++i) K(i, i) += cfg.omega[i] * cfg.omega[i];
    r.min_potential_eigenvalue = Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d>(K).eigenvalues().minCoeff();
    r.potential_positive = r.min_potential_eigenvalue > 0.0;
    if (!r.potential_positive) r.violations.push_back("static potential diag(omega^2) + U/m is not positive definite");

    if (r.potential_positive) {
        const ChainData d = prepare(cfg);
        try {
            const PeakSet peaks = estimate_widths(cfg);
            r.min_relative_width = std::numeric_limits<double>::infinity();
            for (std::size_t n = 0; n < peaks.centers.size(); ++n)
                r.min_relative_width = std::min(r.min_relative_width, peaks.widths[n] / peaks.centers[n]);
            if (!(r.min_relative_width > 1e-12))
                r.violations.push_back("a normal mode is effectively undamped (relative width below 1e-12)");

            std::vector<double> grid(peaks.centers.begin(), peaks.centers.end());
            double top = 0.0;
            for (double c : peaks.centers) top = std::max(top, c);
            const double wmax = 4.0 * std::max(top, 1.0);
            for (int n = 1; n <= 4000; ++n) grid.push_back(wmax * n / 4000.0);
            r.min_abs_det = std::numeric_limits<double>::infinity();
            for (double w : grid) r.min_abs_det = std::min(r.min_abs_det, std::abs(dynamical_matrix(d, w).determinant()));
            if (!(r.min_abs_det > 1e-14 * std::pow(std::max(top, 1.0), 6) * cfg.mass * cfg.mass * cfg.mass))
                r.violations.push_back("det(Gamma + U) nearly vanishes on the real axis (bound mode)");
        } catch (const NegativeEigenvalue& e) {
            r.violations.push_back(e.what());
        }
    }

    r.passed = r.violations.empty();
    return r;
}

double uncertainty_min_eigenvalue(const Eigen::MatrixXd& V) {
    const Eigen::Index n = V.rows() / 2;
    Eigen::MatrixXcd H = (2.0 * V).cast<cd>();
    for (Eigen::Index i = 0; i < n; ++i) {
        H(i, n + i) += cd(0.0, 1.0);
        H(n + i, i) -= cd(0.0, 1.0);
    }
    return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(H, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
}

QuadratureSpec default_quadrature(const SystemConfig& cfg) {
    QuadratureSpec spec;
    spec.tail_scale = 0.0;
    for (const BathConfig& b : cfg.baths) spec.tail_scale = std::max(spec.tail_scale, b.omega_c);
    return spec;
}

CorrelationBlock compute_block(const SystemConfig& cfg, double tau, const PeakSet& peaks,
                               const QuadratureSpec& spec) {
    const ChainData d = prepare(cfg);

    VectorIntegrand f = [&](double w, Eigen::Ref<Eigen::VectorXd> out) {
        const Eigen::Matrix3cd alpha = dynamical_matrix(d, w).inverse();
        std::array<double, 3> dc{}, dy{};
        for (int l = 0; l < 3; ++l) {
            dc[l] = symmetric_weight(d.baths[l], d.sus[l], w);
            dy[l] = chi_imag(d.sus[l], w);
        }
        const cd phase(std::cos(w * tau), -std::sin(w * tau));
        const std::array<double, 3> power{1.0, w, w * w};
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) {
                cd mc = 0.0, my = 0.0;
                for (int l = 0; l < 3; ++l) {
                    const cd prod = alpha(i, l) * std::conj(alpha(j, l));
                    mc += prod * dc[l];
                    my += prod * dy[l];
                }
                mc *= phase;
                my *= phase;
                for (int n = 0; n < 3; ++n) {
                    const int sc = slot(0, n, i, j);
                    const int sy = slot(1, n, i, j);
                    out(sc) = power[n] * mc.real();
                    out(sc + 1) = power[n] * mc.imag();
                    out(sy) = power[n] * my.real();
                    out(sy + 1) = power[n] * my.imag();
                }
            }
        }
    };

    const VectorQuadratureResult q = integrate_line(f, block_dim, peaks, spec);
    const double norm = 1.0 / (2.0 * std::numbers::pi);
    auto integral = [&](int kind, int n, int i, int j) {
        const int s = slot(kind, n, i, j);
        return cd(q.value(s), q.value(s + 1)) * norm;
    };
    auto integral_error = [&](int kind, int n, int i, int j) {
        const int s = slot(kind, n, i, j);
        return std::hypot(q.error(s), q.error(s + 1)) * norm;
    };

    // Phase-space weights: 1 for x, -i m w for p at frequency w and +i m w at -w.
    const double m = cfg.mass;
    const cd I(0.0, 1.0);
    auto weight = [&](bool p_left, bool p_right) -> std::pair<int, cd> {
        if (!p_left && !p_right) return {0, 1.0};
        if (!p_left && p_right) return {1, I * m};
        if (p_left && !p_right) return {1, -I * m};
        return {2, m * m};
    };

    CorrelationBlock out;
    out.tau = tau;
    out.panels = q.panels;
    out.evaluations = q.evaluations;
    double scale = 0.0;
    for (int a = 0; a < 6; ++a) {
        for (int b = 0; b < 6; ++b) {
            const auto [n, w] = weight(a >= 3, b >= 3);
            const int i = a % 3, j = b % 3;
            const cd cval = w * integral(0, n, i, j);
            const cd yval = w * integral(1, n, i, j);
            out.C(a, b) = cval.real();
            out.y(a, b) = yval.imag();
            out.imaginary_residue = std::max({out.imaginary_residue, std::abs(cval.imag()), std::abs(yval.real())});
            out.error = std::max({out.error, std::abs(w) * integral_error(0, n, i, j), std::abs(w) * integral_error(1, n, i, j)});
            scale = std::max({scale, std::abs(cval), std::abs(yval)});
        }
    }
    if (out.imaginary_residue > 1e-9 * scale) {
        std::ostringstream msg;
        msg << "correlator imaginary residue " << out.imaginary_residue << " exceeds 1e-9 of scale " << scale;
        throw NumericalError(msg.str());
    }
    return out;
}

SteadyState::SteadyState(const SystemConfig& cfg) : SteadyState(cfg, default_quadrature(cfg)) {}

SteadyState::SteadyState(const SystemConfig& cfg, const QuadratureSpec& spec) : cfg_(cfg), spec_(spec) {
    check_invariants(cfg_);
    report_ = stationarity_check(cfg_);
    if (!report_.passed) {
        std::string msg = "stationarity check failed:";
        for (const auto& v : report_.violations) msg += " " + v + ";";
        throw StationarityViolation(msg);
    }
    peaks_ = estimate_widths(cfg_);
}

CorrelationBlock SteadyState::block(double tau) const {
    {
        std::shared_lock lock(mutex_);
        auto it = cache_.find(tau);
        if (it != cache_.end()) return it->second;
    }
    CorrelationBlock b = compute_block(cfg_, tau, peaks_, spec_);
    std::unique_lock lock(mutex_);
    return cache_.emplace(tau, std::move(b)).first->second;
}

double SteadyState::correlator(Op a, Op b, double tau) const { return block(tau).c(a, b); }

double SteadyState::commutator_correlator(Op a, Op b, double tau) const { return block(tau).commutator(a, b); }

CovarianceMatrix SteadyState::covariance() const {
    const CorrelationBlock b = block(0.0);
    CovarianceMatrix cov;
    cov.V = 0.5 * (b.C + b.C.transpose());
    cov.error = b.error;
    const double scale = b.C.cwiseAbs().maxCoeff();
    for (int i = 0; i < 3; ++i) cov.max_abs_xp_diagonal = std::max(cov.max_abs_xp_diagonal, std::abs(b.C(i, i + 3)));
    cov.min_uncertainty_eigenvalue = uncertainty_min_eigenvalue(cov.V);

    std::ostringstream msg;
    msg.precision(6);
    if ((b.C - b.C.transpose()).cwiseAbs().maxCoeff() > 1e-9 * scale + 10.0 * b.error) {
        msg << "equal-time correlators are not symmetric";
        throw PhysicalityViolation(msg.str());
    }
    if (cov.max_abs_xp_diagonal > 1e-9 * scale + 10.0 * b.error) {
        msg << "C(x_i, p_i) = " << cov.max_abs_xp_diagonal << " is not zero";
        throw PhysicalityViolation(msg.str());
    }
    if (cov.min_uncertainty_eigenvalue < -1e-6) {
        msg << "uncertainty relation violated: min eigenvalue of 2V + i Omega is " << cov.min_uncertainty_eigenvalue;
        throw PhysicalityViolation(msg.str());
    }
    return cov;
}

double correlator(const SystemConfig& cfg, Op a, Op b, double tau) { return SteadyState(cfg).correlator(a, b, tau); }

double commutator_correlator(const SystemConfig& cfg, Op a, Op b, double tau) {
    return SteadyState(cfg).commutator_correlator(a, b, tau);
}

CovarianceMatrix covariance(const SystemConfig& cfg) { return SteadyState(cfg).covariance(); }

}  // namespace heatchain
