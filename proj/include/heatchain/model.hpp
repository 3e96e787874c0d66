// model.hpp: chain configuration, units and coupling structure
//
// Internal units: hbar = k_B = Omega = 1. Frequencies are in units of Omega,
// temperatures in hbar*Omega/k_B, the spring constant in m*Omega^2.

#pragma once

#include <array>
#include <string>

#include <Eigen/Dense>

#include "json.hpp"

namespace heatchain {

enum class SpectralKind { Ohmic, SuperOhmic };

enum Site : int { L = 0, C = 1, R = 2 };

std::string to_string(SpectralKind kind);
SpectralKind spectral_kind_from_string(const std::string& name);
const char* site_name(Site s);

struct BathConfig {
    SpectralKind kind = SpectralKind::Ohmic;
    double gamma = 1e-4;
    double omega_c = 20.0;
    double temperature = 1.0;
    double squeeze_r = 0.0;
    double squeeze_theta = 0.0;  // stored only; no stationary output depends on it
};

struct SystemConfig {
    std::array<double, 3> omega{1.0, 1.0, 1.0};
    double coupling_k = 0.0;
    double mass = 1.0;
    std::array<BathConfig, 3> baths{};
};

// Parameterization used by the figure presets.
//   omega_i = base_frequency + detuning_weights[i] * detuning
//   T_L = T(1 + dT/T), T_C = T(1 + DT/T), T_R = T(1 - dT/T)
struct ChainPreset {
    SpectralKind kind = SpectralKind::Ohmic;
    double temperature = 0.27;
    double side_gradient = 0.95;     // dT/T
    double central_gradient = 0.0;   // DT/T
    double detuning = 0.0;           // delta omega / Omega
    double coupling_k = 1.8;
    double base_frequency = 1.0;
    std::array<double, 3> detuning_weights{0.4, 0.9, -0.7};
    std::array<double, 3> gamma{1e-4, 0.05, 1e-4};
    double omega_c = 20.0;
    double mass = 1.0;
    std::array<double, 3> squeeze_r{0.0, 0.0, 0.0};
    std::array<double, 3> squeeze_theta{0.0, 0.0, 0.0};

    SystemConfig to_config() const;
};

namespace codata {
inline constexpr double hbar = 1.054571817e-34;  // J s
inline constexpr double k_B = 1.380649e-23;      // J/K
}  // namespace codata

// SI description. Omega_hz is an angular frequency in s^-1 (no 2*pi is applied).
struct PhysicalParams {
    double Omega_hz = 1e9;
    double mass_kg = 1e-16;
    std::array<double, 3> temperatures_K{};
    std::array<double, 3> omega_ratio{1.0, 1.0, 1.0};  // omega_i / Omega
    double coupling_ratio = 0.0;                      // k / (m Omega^2)
    std::array<SpectralKind, 3> kinds{SpectralKind::Ohmic, SpectralKind::Ohmic, SpectralKind::Ohmic};
    std::array<double, 3> gamma_ratio{1e-4, 1e-4, 1e-4};  // gamma / Omega
    double omega_c_ratio = 20.0;                         // omega_c / Omega
    std::array<double, 3> squeeze_r{0.0, 0.0, 0.0};
    std::array<double, 3> squeeze_theta{0.0, 0.0, 0.0};
};

// Throws ConfigError when any invariant is violated.
void check_invariants(const SystemConfig& cfg);

// Parses {"omega": [...], "k": ..., "mass"?: ..., "baths": [{kind, gamma, omega_c, T, r?, theta?} x3]}.
SystemConfig validate(const nlohmann::json& raw);

// Accepts either a raw configuration or {"preset": {...}}.
SystemConfig config_from_document(const nlohmann::json& doc);
ChainPreset preset_from_json(const nlohmann::json& raw);

nlohmann::json to_json(const SystemConfig& cfg);
nlohmann::json to_json(const ChainPreset& preset);

Eigen::Matrix3d coupling_matrix(double k);

SystemConfig to_dimensionless(const PhysicalParams& p);
PhysicalParams to_physical(const SystemConfig& cfg, double Omega_hz, double mass_kg);

struct NormalModes {
    std::array<double, 3> frequencies{};  // ascending
    Eigen::Matrix3d vectors;              // column n belongs to frequencies[n]
};

// Normal modes of the effective potential seen at each mode's own frequency,
// diag(omega_i^2 + DOmega_i - Re chi_i(w)/m) + U/m, iterated to self-consistency.
// Throws NegativeEigenvalue when the static potential is not positive definite.
NormalModes normal_modes(const SystemConfig& cfg);
std::array<double, 3> dressed_frequencies(const SystemConfig& cfg);

}  // namespace heatchain
