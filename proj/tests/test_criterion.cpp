#include <cmath>
#include <fstream>
#include <random>

#include "doctest.h"
#include "fock.hpp"
#include "heatchain/criterion.hpp"
#include "heatchain/errors.hpp"

using namespace heatchain;
using Eigen::MatrixXd;
using Eigen::VectorXd;
using nlohmann::json;

namespace {

CriterionSpec load(const char* name) { return load_criterion_spec(std::string(HEATCHAIN_DATA_DIR) + "/criteria/" + name); }

// P_j flips both quadratures of mode j (block ordering).
CriterionSpec flips(int n, std::vector<double> a) {
    CriterionSpec s;
    s.n = n;
    s.kappa = n;
    s.a = std::move(a);
    for (int j = 0; j < n; ++j) {
        MatrixXd P = MatrixXd::Identity(2 * n, 2 * n);
        P(j, j) = P(n + j, n + j) = -1.0;
        s.P.push_back(P);
    }
    s.Jn = MatrixXd::Zero(2 * n, 2 * n);
    s.Jn.topRightCorner(n, n) = MatrixXd::Identity(n, n);
    s.Jn.bottomLeftCorner(n, n) = -MatrixXd::Identity(n, n);
    return s;
}

MatrixXd product_thermal(const std::vector<double>& nbar, const VectorXd& theta, const VectorXd& squeeze) {
    const int n = static_cast<int>(nbar.size());
    MatrixXd V = product_probe(theta, squeeze);
    for (int k = 0; k < n; ++k) {
        V(k, k) *= 2.0 * nbar[k] + 1.0;
        V(k, n + k) *= 2.0 * nbar[k] + 1.0;
        V(n + k, k) *= 2.0 * nbar[k] + 1.0;
        V(n + k, n + k) *= 2.0 * nbar[k] + 1.0;
    }
    return V;
}

// Two-mode Fock-space state and product probes; quadratures ordered (x1, x2, p1, p2).
struct TwoModeFock {
    int N;
    fock::Mat c, a, b;
    std::array<fock::Mat, 4> q;

    explicit TwoModeFock(int n) : N(n), c(fock::annihilation(n)) {
        const fock::Mat id = fock::Mat::Identity(N, N);
        a = fock::kron(c, id);
        b = fock::kron(id, c);
        q = {fock::position(a), fock::position(b), fock::momentum(a), fock::momentum(b)};
    }

    // exp(alpha c^dag - alpha* c) exp((zeta* c^2 - zeta c^dag^2) / 2) |0> on one mode
    Eigen::VectorXcd single(double x, double p, fock::cd zeta) const {
        const fock::cd alpha(x / std::sqrt(2.0), p / std::sqrt(2.0));
        Eigen::VectorXcd v = Eigen::VectorXcd::Zero(N);
        v(0) = 1.0;
        v = (0.5 * (std::conj(zeta) * c * c - zeta * c.adjoint() * c.adjoint())).exp() * v;
        return (alpha * c.adjoint() - std::conj(alpha) * c).exp() * v;
    }

    Eigen::VectorXcd probe(const VectorXd& X, const std::array<fock::cd, 2>& zeta) const {
        const Eigen::VectorXcd u = single(X(0), X(2), zeta[0]), w = single(X(1), X(3), zeta[1]);
        Eigen::VectorXcd out(N * N);
        for (int i = 0; i < N; ++i) out.segment(i * N, N) = u(i) * w;
        return out;
    }

    MatrixXd covariance(const fock::Mat& rho) const {
        MatrixXd V(4, 4);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) V(i, j) = fock::expect(rho, q[i] * q[j]).real();
        return V;
    }

    MatrixXd covariance(const Eigen::VectorXcd& psi) const {
        MatrixXd V(4, 4);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) V(i, j) = psi.dot(q[i] * (q[j] * psi)).real();
        return V;
    }
};

}  // namespace

TEST_CASE("shipped criterion data") {
    const CriterionSpec t33 = load("t33.json"), t23 = load("t23.json");
    CHECK(t33.kappa == 3);
    CHECK(t33.n == 3);
    CHECK(t23.kappa == 2);
    double sum = 0.0;
    for (double a : t23.a) sum += a;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-15));
    for (double a : t33.a) CHECK(a == 1.0);
    CHECK((t33.Jn * t33.Jn + MatrixXd::Identity(6, 6)).isZero());
    for (const auto& P : t33.P) CHECK((P * P - MatrixXd::Identity(6, 6)).isZero());
}

TEST_CASE("criterion spec parsing errors") {
    json doc = json::parse(R"({"kappa": 2, "n": 2, "a": [0.5, 0.5],
        "P": [[-1,0,0,0, 0,1,0,0, 0,0,-1,0, 0,0,0,1], [[1,0,0,0],[0,-1,0,0],[0,0,1,0],[0,0,0,-1]]],
        "Jn": [0,0,1,0, 0,0,0,1, -1,0,0,0, 0,-1,0,0]})");
    const CriterionSpec s = criterion_from_json(doc);
    CHECK(s.P[0](0, 0) == -1.0);
    CHECK(s.P[1](1, 1) == -1.0);
    CHECK(s.Jn(2, 0) == -1.0);

    auto code = [](const json& d) {
        try {
            criterion_from_json(d);
        } catch (const ConfigError& e) {
            return static_cast<int>(e.code());
        }
        return -1;
    };
    json missing = doc;
    missing.erase("Jn");
    CHECK(code(missing) == static_cast<int>(ConfigError::Code::MissingField));
    json big_kappa = doc;
    big_kappa["kappa"] = 3;
    CHECK(code(big_kappa) == static_cast<int>(ConfigError::Code::Malformed));
    json mismatch = doc;
    mismatch["a"] = json::array({1.0});
    CHECK(code(mismatch) == static_cast<int>(ConfigError::Code::Malformed));
    json singular = doc;
    singular["P"][0] = json::array({0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1});
    CHECK(code(singular) == static_cast<int>(ConfigError::Code::Malformed));
    json short_row = doc;
    short_row["P"][1][2] = json::array({0, 0, 1});
    CHECK(code(short_row) == static_cast<int>(ConfigError::Code::Malformed));
    CHECK_THROWS_AS(load_criterion_spec("/nonexistent/spec.json"), ConfigError);
}

TEST_CASE("probe covariances are pure product states") {
    const VectorXd theta = Eigen::Vector3d(0.3, -1.2, 2.0), s = Eigen::Vector3d(0.0, 0.7, -1.5);
    const MatrixXd S = product_probe(theta, s);
    for (int k = 0; k < 3; ++k) {
        Eigen::Matrix2d local;
        local << S(k, k), S(k, 3 + k), S(3 + k, k), S(3 + k, 3 + k);
        CHECK(local.determinant() == doctest::Approx(0.25).epsilon(1e-13));
        for (int l = 0; l < 3; ++l)
            if (l != k) CHECK(S(k, l) == 0.0);
    }
}

TEST_CASE("criterion at zero displacement") {
    const CriterionSpec t23 = load("t23.json"), t33 = load("t33.json");
    const MatrixXd V = product_thermal({0.2, 0.5, 1.0}, VectorXd::Zero(3), VectorXd::Zero(3));
    const MatrixXd Sigma = product_probe(Eigen::Vector3d(0.1, 0.2, 0.3), Eigen::Vector3d(0.4, -0.2, 0.0));
    const double inv_root = 1.0 / std::sqrt((Sigma + V).determinant());
    CHECK(tau_kappa_n(V, VectorXd::Zero(6), Sigma, t23) == doctest::Approx(0.0).epsilon(1e-12).scale(inv_root));
    CHECK(tau_kappa_n(V, VectorXd::Zero(6), Sigma, t33) == doctest::Approx(-2.0 * inv_root).epsilon(1e-13));
    const CriterionTerms t = tau_terms(V, VectorXd::Zero(6), Sigma, t33);
    CHECK(t.first == doctest::Approx(inv_root).epsilon(1e-13));
    CHECK(t.second.size() == 3);

    CHECK_THROWS_AS(tau_kappa_n(-V, VectorXd::Zero(6), -Sigma, t33), SingularSum);
    CHECK_THROWS_AS(tau_kappa_n(V, VectorXd::Zero(4), Sigma, t33), std::invalid_argument);
}

TEST_CASE("criterion terms match overlaps of Fock-space probes") {
    const TwoModeFock f(24);
    const fock::cd I(0.0, 1.0);
    const fock::Mat gen = 0.3 * (f.a * f.b - f.a.adjoint() * f.b.adjoint()) + 0.2 * I * (f.a.adjoint() * f.b + f.a * f.b.adjoint()) +
                          0.1 * (f.b * f.b - f.b.adjoint() * f.b.adjoint());
    const fock::Mat U = gen.exp();
    const fock::Mat rho = U * fock::kron(fock::thermal(f.N, 0.15), fock::thermal(f.N, 0.05)) * U.adjoint();
    const MatrixXd V = f.covariance(rho);

    const CriterionSpec spec = flips(2, {0.6, 0.4});
    std::mt19937_64 rng(4);
    std::normal_distribution<double> g(0.0, 0.5);
    for (int trial = 0; trial < 4; ++trial) {
        const VectorXd X = Eigen::Vector4d(g(rng), g(rng), g(rng), g(rng));
        const std::array<fock::cd, 2> zeta{fock::cd(0.5 * g(rng), 0.5 * g(rng)), fock::cd(0.5 * g(rng), 0.5 * g(rng))};
        const MatrixXd Sigma = f.covariance(f.probe(VectorXd::Zero(4), zeta));

        const Eigen::VectorXcd phi = f.probe(X, zeta), psi = f.probe(-X, zeta);
        const double first = std::abs(phi.dot(rho * psi));
        const CriterionTerms t = tau_terms(V, X, Sigma, spec);
        CAPTURE(trial);
        CHECK(t.first == doctest::Approx(first).epsilon(1e-7));
        for (int j = 0; j < 2; ++j) {
            const VectorXd mixed = spec.P[j] * X;
            const Eigen::VectorXcd chi = f.probe(mixed, zeta), chi_c = f.probe(-mixed, zeta);
            const double second = std::sqrt(chi.dot(rho * chi).real() * chi_c.dot(rho * chi_c).real());
            CHECK(t.second[j] == doctest::Approx(second).epsilon(1e-7));
        }

        // the same probe through the optimizer's parameterization
        if (trial == 0) {
            Eigen::Vector2d theta, s;
            for (int k = 0; k < 2; ++k) {
                Eigen::Matrix2d local;
                local << Sigma(k, k), Sigma(k, 2 + k), Sigma(2 + k, k), Sigma(2 + k, 2 + k);
                Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(local);
                theta(k) = std::atan2(es.eigenvectors()(1, 1), es.eigenvectors()(0, 1));
                s(k) = 0.25 * std::log(es.eigenvalues()(1) / es.eigenvalues()(0));
            }
            CHECK((product_probe(theta, s) - Sigma).cwiseAbs().maxCoeff() < 1e-8);
        }
    }
}

TEST_CASE("optimized criterion on separable and entangled states") {
    const CriterionSpec t23 = load("t23.json"), t33 = load("t33.json");
    OptimizerBudget budget;
    budget.restarts = 6;
    budget.max_evaluations = 3000;

    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(0.0, 1.5), ang(-3.0, 3.0);
    for (int trial = 0; trial < 4; ++trial) {
        const MatrixXd V = product_thermal({u(rng), u(rng), u(rng)}, Eigen::Vector3d(ang(rng), ang(rng), ang(rng)),
                                           Eigen::Vector3d(0.5 * u(rng), -0.5 * u(rng), 0.3 * u(rng)));
        CHECK(optimize_criterion(V, t23, budget).value <= 1e-12);
        CHECK(optimize_criterion(V, t33, budget).value <= 1e-12);
    }

    // pure symmetric three-mode state from one squeezed mode split on beam splitters
    const double r = 0.8;
    MatrixXd V = MatrixXd::Zero(6, 6);
    const Eigen::Vector3d w(1.0 / std::sqrt(3.0), 1.0 / std::sqrt(3.0), 1.0 / std::sqrt(3.0));
    Eigen::Matrix3d O;
    O.col(0) = w;
    O.col(1) = Eigen::Vector3d(1.0, -1.0, 0.0).normalized();
    O.col(2) = Eigen::Vector3d(1.0, 1.0, -2.0).normalized();
    const Eigen::Vector3d vx(0.5 * std::exp(2.0 * r), 0.5, 0.5), vp(0.5 * std::exp(-2.0 * r), 0.5, 0.5);
    V.topLeftCorner(3, 3) = O * vx.asDiagonal() * O.transpose();
    V.bottomRightCorner(3, 3) = O * vp.asDiagonal() * O.transpose();
    const MeasureResult m33 = optimize_criterion(V, t33, budget);
    const MeasureResult m23 = optimize_criterion(V, t23, budget);
    CHECK(m33.value > 1e-3);
    CHECK(m23.value > m33.value);
    CHECK(m33.best_X.size() == 6);
    CHECK(tau_kappa_n(V, m33.best_X, m33.best_Sigma, t33) == doctest::Approx(m33.value).epsilon(1e-14));
}

TEST_CASE("optimizer is reproducible and monotone in restarts") {
    const CriterionSpec t23 = load("t23.json");
    const MatrixXd V = product_thermal({0.1, 0.3, 0.2}, VectorXd::Zero(3), VectorXd::Zero(3));
    MatrixXd mixed = V;
    mixed(0, 1) = mixed(1, 0) = 0.35;
    mixed(3, 4) = mixed(4, 3) = -0.35;

    OptimizerBudget b;
    b.restarts = 4;
    b.max_evaluations = 1500;
    b.seed = 99;
    const MeasureResult a1 = optimize_criterion(mixed, t23, b), a2 = optimize_criterion(mixed, t23, b);
    CHECK(a1.value == a2.value);
    CHECK(a1.evaluations == a2.evaluations);
    CHECK(a1.best_X == a2.best_X);
    CHECK(a1.value > 0.0);

    OptimizerBudget more = b;
    more.restarts = 8;
    CHECK(optimize_criterion(mixed, t23, more).value >= a1.value);
}
