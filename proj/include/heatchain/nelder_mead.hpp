// nelder_mead.hpp: derivative-free simplex maximization

#pragma once

#include <functional>

#include <Eigen/Dense>

namespace heatchain {

struct SimplexOptions {
    int max_evaluations = 4000;
    double initial_step = 0.5;
    double f_tol = 1e-15;  // spread of simplex values, relative to max(|f_best|, f_floor)
    double f_floor = 1e-300;
    double x_tol = 1e-10;
};

struct SimplexResult {
    Eigen::VectorXd x;
    double value = 0.0;
    int evaluations = 0;
    bool converged = false;
};

SimplexResult maximize_simplex(const std::function<double(const Eigen::VectorXd&)>& f,
                               const Eigen::VectorXd& start, const SimplexOptions& opt = {});

}  // namespace heatchain
