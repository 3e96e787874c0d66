// transport.cpp: currents from the covariance and Wick-reduced current correlations

#include "heatchain/transport.hpp"

#include <array>
#include <stdexcept>

namespace heatchain {

namespace {

struct CurrentTerm {
    double sign;
    Site x;
    Site p;
};

// j_ij = (k/4m) sum_t s_t {x_a, p_b}.
std::array<CurrentTerm, 4> expansion(Site i, Site j) {
    return {{{+1.0, j, j}, {-1.0, i, i}, {+1.0, j, i}, {-1.0, i, j}}};
}

void require_adjacent(Site i, Site j) {
    const int gap = static_cast<int>(i) - static_cast<int>(j);
    if (gap != 1 && gap != -1) throw std::invalid_argument("currents are defined between adjacent oscillators only");
}

}  // namespace

std::pair<Site, Site> sites(Pair p) {
    return p == Pair::CL ? std::pair<Site, Site>{C, L} : std::pair<Site, Site>{R, C};
}

double mean_pair_current(const CovarianceMatrix& cov, double k, double mass, Site i, Site j) {
    require_adjacent(i, j);
    double sum = 0.0;
    for (const CurrentTerm& t : expansion(i, j)) sum += t.sign * cov(position(t.x), momentum(t.p));
    return k / (2.0 * mass) * sum;
}

double mean_pair_current(const SteadyState& ss, Site i, Site j) {
    return mean_pair_current(ss.covariance(), ss.config().coupling_k, ss.config().mass, i, j);
}

double total_current(const SteadyState& ss) {
    const CovarianceMatrix cov = ss.covariance();
    const double k = ss.config().coupling_k;
    const double m = ss.config().mass;
    return mean_pair_current(cov, k, m, C, L) + mean_pair_current(cov, k, m, R, C);
}

double interaction_energy(const CovarianceMatrix& cov, double k) {
    const auto x = [&](Site a, Site b) { return cov(position(a), position(b)); };
    return 0.5 * k * (x(L, L) + 2.0 * x(C, C) + x(R, R) - 2.0 * (x(L, C) + x(R, C)));
}

double interaction_energy(const SteadyState& ss) {
    return interaction_energy(ss.covariance(), ss.config().coupling_k);
}

double wick_connected(double c11, double c22, double c12, double c21,
                      double y11, double y22, double y12, double y21, WickTerms terms) {
    // With Y = i y every Y*Y product enters as -y*y.
    double value = c11 * c22 + c12 * c21;
    if (terms == WickTerms::Full) value -= y11 * y22 + y12 * y21;
    return 4.0 * value;
}

double current_correlation(const CorrelationBlock& block, double k, double mass, Pair p1, Pair p2,
                           WickTerms terms) {
    const auto [i1, j1] = sites(p1);
    const auto [i2, j2] = sites(p2);
    double sum = 0.0;
    for (const CurrentTerm& t : expansion(i1, j1)) {
        const Op a1 = position(t.x), a2 = momentum(t.p);
        for (const CurrentTerm& u : expansion(i2, j2)) {
            const Op b1 = position(u.x), b2 = momentum(u.p);
            sum += t.sign * u.sign *
                   wick_connected(block.c(a1, b1), block.c(a2, b2), block.c(a1, b2), block.c(a2, b1),
                                  block.commutator(a1, b1), block.commutator(a2, b2),
                                  block.commutator(a1, b2), block.commutator(a2, b1), terms);
        }
    }
    const double pref = k / (4.0 * mass);
    return pref * pref * sum;
}

double current_correlation(const SteadyState& ss, Pair p1, Pair p2, double tau, WickTerms terms) {
    return current_correlation(ss.block(tau), ss.config().coupling_k, ss.config().mass, p1, p2, terms);
}

double total_current_correlation(const SteadyState& ss, double tau, WickTerms terms) {
    const CorrelationBlock block = ss.block(tau);
    double sum = 0.0;
    for (Pair p1 : {Pair::CL, Pair::RC})
        for (Pair p2 : {Pair::CL, Pair::RC})
            sum += current_correlation(block, ss.config().coupling_k, ss.config().mass, p1, p2, terms);
    return sum;
}

CurrentStats current_stats(const SteadyState& ss, const std::vector<double>& taus) {
    const CovarianceMatrix cov = ss.covariance();
    const double k = ss.config().coupling_k;
    const double m = ss.config().mass;
    CurrentStats s;
    s.j_CL = mean_pair_current(cov, k, m, C, L);
    s.j_RC = mean_pair_current(cov, k, m, R, C);
    s.J_total = s.j_CL + s.j_RC;
    s.H_int = interaction_energy(cov, k);
    for (double tau : taus) s.K_JJ.emplace_back(tau, total_current_correlation(ss, tau));
    return s;
}

}  // namespace heatchain
