// quadrature.hpp: globally adaptive Gauss-Kronrod integration on the frequency line

#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "heatchain/model.hpp"

namespace heatchain {

struct PeakSet {
    std::vector<double> centers;  // ascending
    std::vector<double> widths;
};

struct QuadratureSpec {
    double rel_tol = 1e-9;
    double abs_tol = 1e-14;
    std::size_t max_subdivisions = 10000;
    // Line integrals run over [-omega_max, omega_max]. When omega_max <= 0 it is
    // tail_scale * ln(1/rel_tol) + max peak center.
    double tail_scale = 20.0;
    double omega_max = 0.0;
    std::array<double, 3> bracket_multipliers{1.0, 10.0, 100.0};
};

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;
    std::size_t panels = 0;
    std::size_t evaluations = 0;
};

struct VectorQuadratureResult {
    Eigen::VectorXd value;
    Eigen::VectorXd error;
    std::size_t panels = 0;
    std::size_t evaluations = 0;
};

using ScalarIntegrand = std::function<double(double)>;
using VectorIntegrand = std::function<void(double, Eigen::Ref<Eigen::VectorXd>)>;

double resolve_omega_max(const PeakSet& peaks, const QuadratureSpec& spec);

// Panel boundaries on [0, omega_max] after folding the line onto the half line:
// 0, omega_max and |c +- w*width| for every peak and bracket multiplier.
std::vector<double> line_breakpoints(const PeakSet& peaks, const QuadratureSpec& spec);

// Integral of f over [-omega_max, omega_max], evaluated as the integral of
// f(w) + f(-w) over [0, omega_max] so that w = 0 is always a panel boundary.
QuadratureResult integrate_line(const ScalarIntegrand& f, const PeakSet& peaks,
                                const QuadratureSpec& spec);
VectorQuadratureResult integrate_line(const VectorIntegrand& f, int dim, const PeakSet& peaks,
                                      const QuadratureSpec& spec);

// Integral over [breakpoints.front(), breakpoints.back()] with the given initial panels.
VectorQuadratureResult integrate_panels(const VectorIntegrand& f, int dim,
                                        const std::vector<double>& breakpoints,
                                        const QuadratureSpec& spec);
QuadratureResult integrate_panels(const ScalarIntegrand& f, const std::vector<double>& breakpoints,
                                  const QuadratureSpec& spec);

QuadratureResult integrate_interval(const ScalarIntegrand& f, double a, double b,
                                    const QuadratureSpec& spec);

// Integral over [a, inf) through s = a + scale * t / (1 - t).
QuadratureResult integrate_to_infinity(const ScalarIntegrand& f, double a, double scale,
                                       const QuadratureSpec& spec);

PeakSet estimate_widths(const SystemConfig& cfg);

}  // namespace heatchain
