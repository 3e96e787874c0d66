// spectral.hpp: bath spectral densities and susceptibilities
//
// All susceptibility values are chi(w)/hbar in units of m*Omega^2.

#pragma once

#include <complex>
#include <functional>

#include "heatchain/model.hpp"

namespace heatchain {

struct Susceptibility {
    SpectralKind kind = SpectralKind::Ohmic;
    double gamma = 1e-4;
    double omega_c = 20.0;
    double mass = 1.0;

    static Susceptibility of(const BathConfig& b, double mass = 1.0) {
        return {b.kind, b.gamma, b.omega_c, mass};
    }
};

// J(w) for w >= 0; throws NegativeFrequency otherwise.
double spectral_density(const Susceptibility& s, double omega);
double spectral_density(const BathConfig& b, double omega, double mass = 1.0);

// Odd extension of J.
double chi_imag(const Susceptibility& s, double omega);

// chi_imag(w) / w, even and finite at w = 0.
double chi_imag_over_omega(const Susceptibility& s, double omega);

// Closed form with Gamma(0, -x) read as its principal value -Ei(x).
double chi_real(const Susceptibility& s, double omega);

std::complex<double> chi(const Susceptibility& s, double omega);

// (1/pi) PV integral of chi_imag(s)/(s - w) over the real line, folded onto
// s >= 0 and regularized by subtracting J(|w|) on [0, 2|w|].
double kramers_kronig_numeric(const Susceptibility& s, double omega, double rel_tol = 1e-11);

// Same transform for a user-supplied J on [0, inf). J must decay faster than
// 1/w^2; `scale` is its decay length, used to map the tail.
double kramers_kronig_numeric(const std::function<double(double)>& J, double omega, double scale,
                              double rel_tol = 1e-11);

// (2/(pi m)) * integral of J(w)/w over w > 0; gamma*omega_c for both kinds.
double frequency_shift(const BathConfig& b);

}  // namespace heatchain
