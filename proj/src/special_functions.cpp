// special_functions.cpp: series, continued fraction and asymptotic expansions

#include "heatchain/special_functions.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "heatchain/errors.hpp"

namespace heatchain::special {

namespace {

constexpr double eps = std::numeric_limits<double>::epsilon();
constexpr int max_terms = 1000;

// -gamma - ln x - sum_{k>=1} (-x)^k / (k k!)
double e1_series(double x) {
    double sum = 0.0;
    double term = 1.0;
    for (int k = 1; k < max_terms; ++k) {
        term *= -x / k;
        const double add = term / k;
        sum += add;
        if (std::abs(add) < eps * std::abs(sum)) break;
    }
    return -euler_gamma - std::log(x) - sum;
}

// Modified Lentz evaluation of exp(x) E1(x), valid for x >= 1.
double e1_continued_fraction_scaled(double x) {
    constexpr double tiny = 1e-300;
    double b = x + 1.0;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < max_terms; ++i) {
        const double an = -static_cast<double>(i) * i;
        b += 2.0;
        d = 1.0 / (an * d + b);
        c = b + an / c;
        const double del = c * d;
        h *= del;
        if (std::abs(del - 1.0) < eps) return h;
    }
    throw NumericalError("E1 continued fraction did not converge at x = " + std::to_string(x));
}

// gamma + ln x + sum_{k>=1} x^k / (k k!)
double ei_series(double x) {
    double sum = 0.0;
    double term = 1.0;
    for (int k = 1; k < max_terms; ++k) {
        term *= x / k;
        const double add = term / k;
        sum += add;
        if (add < eps * sum) break;
    }
    return euler_gamma + std::log(x) + sum;
}

// exp(-x) Ei(x) ~ (1/x) sum k!/x^k, truncated at the smallest term.
double ei_asymptotic_scaled(double x) {
    double sum = 1.0;
    double term = 1.0;
    for (int k = 1; k < max_terms; ++k) {
        const double next = term * k / x;
        if (next > term) break;
        term = next;
        sum += term;
        if (term < eps * sum) break;
    }
    return sum / x;
}

constexpr double ei_switch = 40.0;

}  // namespace

double e1_scaled(double x) {
    if (!(x > 0.0)) throw DomainError("e1_scaled requires x > 0");
    if (x <= 1.0) return std::exp(x) * e1_series(x);
    return e1_continued_fraction_scaled(x);
}

double expint_e1(double x) {
    if (!(x > 0.0)) throw DomainError("E1 requires x > 0");
    if (x <= 1.0) return e1_series(x);
    return std::exp(-x) * e1_continued_fraction_scaled(x);
}

double ei_scaled(double x) {
    if (!(x > 0.0)) throw DomainError("ei_scaled requires x > 0");
    if (x > ei_switch) return ei_asymptotic_scaled(x);
    return std::exp(-x) * ei_series(x);
}

double expint_ei(double x) {
    if (x == 0.0 || std::isnan(x)) throw DomainError("Ei is singular at x = 0");
    if (x < 0.0) return -expint_e1(-x);
    if (x > ei_switch) return std::exp(x) * ei_asymptotic_scaled(x);
    return ei_series(x);
}

double exp_integral(double x) {
    if (x == 0.0 || std::isnan(x)) throw DomainError("exp_integral is singular at x = 0");
    if (x > 0.0) return expint_e1(x);
    return -expint_ei(-x);
}

}  // namespace heatchain::special
