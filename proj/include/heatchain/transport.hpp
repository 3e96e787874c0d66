// transport.hpp: energy currents, interaction energy and current fluctuations

#pragma once

#include <vector>

#include "heatchain/steady.hpp"

namespace heatchain {

// j_ij is the current from oscillator j into oscillator i.
enum class Pair { CL, RC };

std::pair<Site, Site> sites(Pair p);

enum class WickTerms { Full, SymmetricOnly };

// (k/2m)[C(x_j,p_j) - C(x_i,p_i) + C(x_j,p_i) - C(x_i,p_j)] at equal time.
// Only adjacent pairs carry a current; (L, R) throws std::invalid_argument.
double mean_pair_current(const SteadyState& ss, Site i, Site j);
double mean_pair_current(const CovarianceMatrix& cov, double k, double mass, Site i, Site j);

double total_current(const SteadyState& ss);

double interaction_energy(const SteadyState& ss);
double interaction_energy(const CovarianceMatrix& cov, double k);

// Connected part (1/2)<{X, Z}> - <X><Z> for X = {A1(tau), A2(tau)}, Z = {B1, B2}
// of a zero-mean Gaussian state, from C = (1/2)<{a(tau), b}> and y with
// (1/2)<[a(tau), b]> = i y. Arguments are ordered (A1,B1), (A2,B2), (A1,B2), (A2,B1).
double wick_connected(double c11, double c22, double c12, double c21,
                      double y11, double y22, double y12, double y21,
                      WickTerms terms = WickTerms::Full);

// (1/2)<{j_p1(tau), j_p2(0)}> - <j_p1><j_p2>.
double current_correlation(const SteadyState& ss, Pair p1, Pair p2, double tau,
                           WickTerms terms = WickTerms::Full);
double current_correlation(const CorrelationBlock& block, double k, double mass, Pair p1, Pair p2,
                           WickTerms terms = WickTerms::Full);

double total_current_correlation(const SteadyState& ss, double tau, WickTerms terms = WickTerms::Full);

struct CurrentStats {
    double j_CL = 0.0;
    double j_RC = 0.0;
    double J_total = 0.0;
    double H_int = 0.0;
    std::vector<std::pair<double, double>> K_JJ;
};

CurrentStats current_stats(const SteadyState& ss, const std::vector<double>& taus = {});

}  // namespace heatchain
