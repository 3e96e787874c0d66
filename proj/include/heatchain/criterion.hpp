// criterion.hpp: Gaussian separability figure of merit T_{kappa,n}
//
// V and the probe covariance Sigma use the raw convention (vacuum = hbar/2 I, hbar = 1)
// and block ordering (x_1..x_n, p_1..p_n). The probes are pure product states
// displaced by +X and -X.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"

namespace heatchain {

struct CriterionSpec {
    int kappa = 0;
    int n = 0;
    std::vector<double> a;
    std::vector<Eigen::MatrixXd> P;
    Eigen::MatrixXd Jn;
    std::string label;
};

CriterionSpec criterion_from_json(const nlohmann::json& doc);
CriterionSpec load_criterion_spec(const std::string& path);

// Block-diagonal (per mode) pure covariance (1/2) R(theta_k) diag(e^{2 s_k}, e^{-2 s_k}) R(theta_k)^T.
Eigen::MatrixXd product_probe(const Eigen::VectorXd& theta, const Eigen::VectorXd& squeeze);

struct CriterionTerms {
    double first = 0.0;
    std::vector<double> second;  // without the a_j weights
    double value = 0.0;
};

CriterionTerms tau_terms(const Eigen::MatrixXd& V, const Eigen::VectorXd& X, const Eigen::MatrixXd& Sigma,
                         const CriterionSpec& spec);
double tau_kappa_n(const Eigen::MatrixXd& V, const Eigen::VectorXd& X, const Eigen::MatrixXd& Sigma,
                   const CriterionSpec& spec);

struct OptimizerBudget {
    int restarts = 12;
    int max_evaluations = 6000;  // per restart
    std::uint64_t seed = 1;
};

struct MeasureResult {
    double value = 0.0;
    int restarts = 0;
    int best_restart = -1;
    long evaluations = 0;
    bool budget_exhausted = false;
    Eigen::VectorXd best_X;
    Eigen::MatrixXd best_Sigma;
};

MeasureResult optimize_criterion(const Eigen::MatrixXd& V, const CriterionSpec& spec,
                                 const OptimizerBudget& budget = {});

}  // namespace heatchain
