// special_functions.hpp: exponential integrals for the closed-form susceptibility

#pragma once

namespace heatchain::special {

inline constexpr double euler_gamma = 0.57721566490153286060651209008240243;

// E1(x) for x > 0.
double expint_e1(double x);

// Ei(x) for x != 0 (Ei(-x) = -E1(x)).
double expint_ei(double x);

// exp(x) * E1(x) and exp(-x) * Ei(x) for x > 0, free of overflow.
double e1_scaled(double x);
double ei_scaled(double x);

// E1(x) for x > 0; for x < 0 the principal-value continuation -Ei(-x) of Gamma(0, x).
// Throws DomainError at x = 0.
double exp_integral(double x);

}  // namespace heatchain::special
