// criterion.cpp: figure of merit with product Gaussian probes and its multi-restart search

#include "heatchain/criterion.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <random>

#include "heatchain/errors.hpp"
#include "heatchain/nelder_mead.hpp"

namespace heatchain {

using nlohmann::json;

namespace {

ConfigError bad(const std::string& what) { return ConfigError(ConfigError::Code::Malformed, "criterion spec: " + what); }

Eigen::MatrixXd matrix_from_json(const json& j, int dim, const std::string& name) {
    Eigen::MatrixXd M(dim, dim);
    if (!j.is_array()) throw bad(name + " must be an array");
    if (j.size() == static_cast<std::size_t>(dim * dim) && (j.empty() || j[0].is_number())) {
        for (int r = 0; r < dim; ++r)
            for (int c = 0; c < dim; ++c) M(r, c) = j[r * dim + c].get<double>();
        return M;
    }
    if (j.size() != static_cast<std::size_t>(dim)) throw bad(name + " must be " + std::to_string(dim) + "x" + std::to_string(dim));
    for (int r = 0; r < dim; ++r) {
        if (!j[r].is_array() || j[r].size() != static_cast<std::size_t>(dim)) throw bad(name + " has a malformed row");
        for (int c = 0; c < dim; ++c) {
            if (!j[r][c].is_number()) throw bad(name + " entries must be numbers");
            M(r, c) = j[r][c].get<double>();
        }
    }
    return M;
}

constexpr double squeeze_bound = 4.0;

}  // namespace

CriterionSpec criterion_from_json(const json& doc) {
    if (!doc.is_object()) throw bad("document must be an object");
    for (const char* key : {"kappa", "n", "a", "P", "Jn"})
        if (!doc.contains(key)) throw ConfigError(ConfigError::Code::MissingField, std::string("criterion spec: missing ") + key);
    CriterionSpec s;
    if (!doc["kappa"].is_number_integer() || !doc["n"].is_number_integer()) throw bad("kappa and n must be integers");
    s.kappa = doc["kappa"].get<int>();
    s.n = doc["n"].get<int>();
    if (s.n < 1 || s.kappa < 2 || s.kappa > s.n) throw bad("need 2 <= kappa <= n");
    if (!doc["a"].is_array() || !doc["P"].is_array()) throw bad("a and P must be arrays");
    for (const json& v : doc["a"]) {
        if (!v.is_number()) throw bad("a entries must be numbers");
        s.a.push_back(v.get<double>());
    }
    const int dim = 2 * s.n;
    for (std::size_t j = 0; j < doc["P"].size(); ++j) {
        Eigen::MatrixXd P = matrix_from_json(doc["P"][j], dim, "P[" + std::to_string(j) + "]");
        if (std::abs(P.determinant()) < 1e-12) throw bad("P[" + std::to_string(j) + "] is not invertible");
        s.P.push_back(std::move(P));
    }
    if (s.a.size() != s.P.size()) throw bad("a and P must have the same length");
    s.Jn = matrix_from_json(doc["Jn"], dim, "Jn");
    if (doc.contains("label") && doc["label"].is_string()) s.label = doc["label"].get<std::string>();
    return s;
}

CriterionSpec load_criterion_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(ConfigError::Code::MissingField, "cannot open criterion spec " + path);
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw bad(std::string("invalid JSON: ") + e.what());
    }
    return criterion_from_json(doc);
}

Eigen::MatrixXd product_probe(const Eigen::VectorXd& theta, const Eigen::VectorXd& squeeze) {
    const Eigen::Index n = theta.size();
    Eigen::MatrixXd S = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    for (Eigen::Index k = 0; k < n; ++k) {
        const double c = std::cos(theta(k)), s = std::sin(theta(k));
        Eigen::Matrix2d R;
        R << c, -s, s, c;
        const Eigen::Matrix2d D = Eigen::Vector2d(std::exp(2.0 * squeeze(k)), std::exp(-2.0 * squeeze(k))).asDiagonal();
        const Eigen::Matrix2d local = 0.5 * R * D * R.transpose();
        S(k, k) = local(0, 0);
        S(k, n + k) = local(0, 1);
        S(n + k, k) = local(1, 0);
        S(n + k, n + k) = local(1, 1);
    }
    return S;
}

CriterionTerms tau_terms(const Eigen::MatrixXd& V, const Eigen::VectorXd& X, const Eigen::MatrixXd& Sigma,
                         const CriterionSpec& spec) {
    const Eigen::Index dim = 2 * spec.n;
    if (V.rows() != dim || Sigma.rows() != dim || X.size() != dim)
        throw std::invalid_argument("criterion dimensions do not match 2n");
    const Eigen::MatrixXd sum = Sigma + V;
    Eigen::LLT<Eigen::MatrixXd> llt(sum);
    if (llt.info() != Eigen::Success) throw SingularSum("Sigma + V is not positive definite");
    const Eigen::MatrixXd Lm = llt.matrixL();
    double log_det = 0.0;
    for (Eigen::Index i = 0; i < dim; ++i) log_det += 2.0 * std::log(Lm(i, i));
    const double common = std::exp(-0.5 * log_det);

    // (Sigma^-1 + V^-1)^-1 = Sigma (Sigma + V)^-1 V
    Eigen::MatrixXd harmonic = Sigma * llt.solve(V);
    harmonic = 0.5 * (harmonic + harmonic.transpose()).eval();

    CriterionTerms t;
    const Eigen::VectorXd jx = spec.Jn * X;
    t.first = std::exp(-2.0 * jx.dot(harmonic * jx)) * common;
    t.value = t.first;
    for (std::size_t j = 0; j < spec.P.size(); ++j) {
        const Eigen::VectorXd px = spec.P[j] * X;
        const double term = std::exp(-0.5 * px.dot(llt.solve(px))) * common;
        t.second.push_back(term);
        t.value -= spec.a[j] * term;
    }
    return t;
}

double tau_kappa_n(const Eigen::MatrixXd& V, const Eigen::VectorXd& X, const Eigen::MatrixXd& Sigma,
                   const CriterionSpec& spec) {
    return tau_terms(V, X, Sigma, spec).value;
}

MeasureResult optimize_criterion(const Eigen::MatrixXd& V, const CriterionSpec& spec, const OptimizerBudget& budget) {
    const int n = spec.n;
    const int dim = 2 * n;
    if (V.rows() != dim || V.cols() != dim) throw std::invalid_argument("V must be 2n x 2n");

    // z = (X, theta, u) with squeeze s = bound * tanh(u / bound).
    auto unpack = [&](const Eigen::VectorXd& z, Eigen::VectorXd& X, Eigen::MatrixXd& Sigma) {
        X = z.head(dim);
        const Eigen::VectorXd theta = z.segment(dim, n);
        Eigen::VectorXd s(n);
        for (int k = 0; k < n; ++k) s(k) = squeeze_bound * std::tanh(z(dim + n + k) / squeeze_bound);
        Sigma = product_probe(theta, s);
    };
    auto objective = [&](const Eigen::VectorXd& z) {
        Eigen::VectorXd X;
        Eigen::MatrixXd Sigma;
        unpack(z, X, Sigma);
        return tau_kappa_n(V, X, Sigma, spec);
    };

    MeasureResult best;
    best.value = -std::numeric_limits<double>::infinity();
    for (int r = 0; r < budget.restarts; ++r) {
        std::seed_seq seq{static_cast<std::uint32_t>(budget.seed & 0xffffffffu),
                          static_cast<std::uint32_t>(budget.seed >> 32), static_cast<std::uint32_t>(r)};
        std::mt19937_64 rng(seq);
        std::normal_distribution<double> normal(0.0, 1.0);
        std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);

        Eigen::VectorXd z = Eigen::VectorXd::Zero(2 * dim);
        const double x_scale = std::array<double, 3>{1.0, 0.5, 2.0}[r % 3];
        for (int i = 0; i < dim; ++i) z(i) = x_scale * normal(rng);
        if (r == 1) {
            for (int k = 0; k < n; ++k) {
                Eigen::Matrix2d local;
                local << V(k, k), V(k, n + k), V(n + k, k), V(n + k, n + k);
                Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(local);
                const Eigen::Vector2d major = es.eigenvectors().col(1);
                z(dim + k) = std::atan2(major(1), major(0));
                const double s = 0.25 * std::log(es.eigenvalues()(1) / es.eigenvalues()(0));
                z(dim + n + k) = squeeze_bound * std::atanh(std::min(s / squeeze_bound, 0.999));
            }
        } else if (r >= 2) {
            for (int k = 0; k < n; ++k) {
                z(dim + k) = angle(rng);
                z(dim + n + k) = 0.7 * normal(rng);
            }
        }

        SimplexOptions opt;
        long used = 0;
        SimplexResult res{z, objective(z), 1, false};
        ++used;
        for (int cycle = 0; cycle < 4 && used < budget.max_evaluations; ++cycle) {
            opt.max_evaluations = static_cast<int>(budget.max_evaluations - used);
            opt.initial_step = cycle == 0 ? 0.5 : 0.1;
            SimplexResult next = maximize_simplex(objective, res.x, opt);
            used += next.evaluations;
            const bool improved = next.value > res.value;
            if (improved) res = next;
            res.converged = next.converged;
            if (!improved && next.converged) break;
        }

        best.evaluations += used;
        best.restarts = r + 1;
        if (res.value > best.value) {
            best.value = res.value;
            best.best_restart = r;
            unpack(res.x, best.best_X, best.best_Sigma);
            best.budget_exhausted = !res.converged && used >= budget.max_evaluations;
        }
    }
    return best;
}

}  // namespace heatchain
