// spectral.cpp: closed-form and Kramers-Kronig susceptibilities

#include "heatchain/spectral.hpp"

#include <cmath>
#include <numbers>

#include "heatchain/errors.hpp"
#include "heatchain/quadrature.hpp"
#include "heatchain/special_functions.hpp"

namespace heatchain {

namespace {

// J(|w|) without the sign check.
double density_abs(const Susceptibility& s, double w) {
    const double pref = 0.5 * std::numbers::pi * s.mass * s.gamma;
    const double decay = std::exp(-w / s.omega_c);
    if (s.kind == SpectralKind::Ohmic) return pref * w * decay;
    return pref * (w * w / s.omega_c) * decay;
}

}  // namespace

double spectral_density(const Susceptibility& s, double omega) {
    if (omega < 0.0 || std::isnan(omega)) throw NegativeFrequency("spectral density requires w >= 0");
    return density_abs(s, omega);
}

double spectral_density(const BathConfig& b, double omega, double mass) {
    return spectral_density(Susceptibility::of(b, mass), omega);
}

double chi_imag(const Susceptibility& s, double omega) {
    if (omega > 0.0) return density_abs(s, omega);
    if (omega < 0.0) return -density_abs(s, -omega);
    return 0.0;
}

double chi_imag_over_omega(const Susceptibility& s, double omega) {
    const double w = std::abs(omega);
    const double pref = 0.5 * std::numbers::pi * s.mass * s.gamma;
    const double decay = std::exp(-w / s.omega_c);
    if (s.kind == SpectralKind::Ohmic) return pref * decay;
    return pref * (w / s.omega_c) * decay;
}

double chi_real(const Susceptibility& s, double omega) {
    const double static_value = s.mass * s.gamma * s.omega_c;
    const double w = std::abs(omega);
    if (w == 0.0) return static_value;
    const double u = w / s.omega_c;
    const double below = -special::ei_scaled(u);  // e^{-u} Gamma(0, -u)
    const double above = special::e1_scaled(u);   // e^{u} Gamma(0, u)
    if (s.kind == SpectralKind::Ohmic)
        return 0.5 * s.mass * s.gamma * w * (below - above) + static_value;
    return 0.5 * s.mass * s.gamma / s.omega_c * w * w * (below + above) + static_value;
}

std::complex<double> chi(const Susceptibility& s, double omega) {
    return {chi_real(s, omega), chi_imag(s, omega)};
}

double kramers_kronig_numeric(const std::function<double(double)>& J, double omega, double scale,
                              double rel_tol) {
    QuadratureSpec spec;
    spec.rel_tol = rel_tol;
    spec.abs_tol = 1e-300;
    spec.max_subdivisions = 100000;
    const double w = std::abs(omega);
    if (w == 0.0) {
        const auto r = integrate_to_infinity([&](double x) { return J(x) / x; }, 0.0, scale, spec);
        return 2.0 * r.value / std::numbers::pi;
    }
    const double jw = J(w);
    auto subtracted = [&](double x) { return (J(x) - jw) / (x - w); };
    const double near = integrate_panels(subtracted, {0.0, w, 2.0 * w}, spec).value;
    const double far = integrate_to_infinity([&](double x) { return J(x) / (x - w); }, 2.0 * w, scale, spec).value;
    const double mirror = integrate_to_infinity([&](double x) { return J(x) / (x + w); }, 0.0, scale, spec).value;
    return (near + far + mirror) / std::numbers::pi;
}

double kramers_kronig_numeric(const Susceptibility& s, double omega, double rel_tol) {
    return kramers_kronig_numeric([&](double x) { return density_abs(s, x); }, omega, s.omega_c,
                                  rel_tol);
}

double frequency_shift(const BathConfig& b) { return b.gamma * b.omega_c; }

}  // namespace heatchain
