// model.cpp: configuration parsing, presets and normal modes

#include "heatchain/model.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <set>

#include "heatchain/errors.hpp"
#include "heatchain/spectral.hpp"

namespace heatchain {

using nlohmann::json;

namespace {

ConfigError missing(const std::string& where) {
    return ConfigError(ConfigError::Code::MissingField, "missing field: " + where);
}

ConfigError malformed(const std::string& what) {
    return ConfigError(ConfigError::Code::Malformed, what);
}

ConfigError non_positive(const std::string& what) {
    return ConfigError(ConfigError::Code::NonPositiveParameter, what);
}

double number_at(const json& obj, const std::string& key, const std::string& where) {
    auto it = obj.find(key);
    if (it == obj.end()) throw missing(where + key);
    if (!it->is_number()) throw malformed(where + key + " must be a number");
    const double v = it->get<double>();
    if (!std::isfinite(v)) throw malformed(where + key + " must be finite");
    return v;
}

double number_or(const json& obj, const std::string& key, double fallback, const std::string& where) {
    if (!obj.contains(key)) return fallback;
    return number_at(obj, key, where);
}

template <std::size_t N>
std::array<double, N> array_at(const json& obj, const std::string& key, const std::string& where) {
    auto it = obj.find(key);
    if (it == obj.end()) throw missing(where + key);
    if (!it->is_array() || it->size() != N)
        throw malformed(where + key + " must be an array of " + std::to_string(N) + " numbers");
    std::array<double, N> out{};
    for (std::size_t i = 0; i < N; ++i) {
        const json& e = (*it)[i];
        if (!e.is_number()) throw malformed(where + key + "[" + std::to_string(i) + "] must be a number");
        out[i] = e.get<double>();
    }
    return out;
}

template <std::size_t N>
std::array<double, N> array_or(const json& obj, const std::string& key, std::array<double, N> fallback,
                               const std::string& where) {
    if (!obj.contains(key)) return fallback;
    return array_at<N>(obj, key, where);
}

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (!it.key().empty() && it.key()[0] == '_') continue;
        if (!allowed.count(it.key())) throw malformed(where + "unknown key '" + it.key() + "'");
    }
}

std::string lowered(std::string s) {
    std::string out;
    for (char c : s)
        if (c != '-' && c != '_' && c != ' ') out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    return out;
}

}  // namespace

std::string to_string(SpectralKind kind) { return kind == SpectralKind::Ohmic ? "ohmic" : "super-ohmic"; }

SpectralKind spectral_kind_from_string(const std::string& name) {
    const std::string k = lowered(name);
    if (k == "ohmic") return SpectralKind::Ohmic;
    if (k == "superohmic") return SpectralKind::SuperOhmic;
    throw ConfigError(ConfigError::Code::UnknownSpectralKind, "unknown spectral kind '" + name + "'");
}

const char* site_name(Site s) {
    switch (s) {
        case L: return "L";
        case C: return "C";
        case R: return "R";
    }
    return "?";
}

void check_invariants(const SystemConfig& cfg) {
    for (int i = 0; i < 3; ++i) {
        const std::string tag = std::string("site ") + site_name(static_cast<Site>(i)) + ": ";
        if (!(cfg.omega[i] > 0.0)) throw non_positive(tag + "omega must be > 0");
        const BathConfig& b = cfg.baths[i];
        if (!(b.gamma > 0.0)) throw non_positive(tag + "gamma must be > 0");
        if (!(b.omega_c > 0.0)) throw non_positive(tag + "omega_c must be > 0");
        if (!(b.temperature > 0.0)) throw non_positive(tag + "temperature must be > 0");
        if (!(b.squeeze_r >= 0.0)) throw non_positive(tag + "squeeze r must be >= 0");
        if (!(b.squeeze_theta > -std::numbers::pi && b.squeeze_theta <= std::numbers::pi))
            throw malformed(tag + "squeeze theta must lie in (-pi, pi]");
        for (double v : {cfg.omega[i], b.gamma, b.omega_c, b.temperature, b.squeeze_r})
            if (!std::isfinite(v)) throw malformed(tag + "parameters must be finite");
    }
    if (!(cfg.coupling_k >= 0.0) || !std::isfinite(cfg.coupling_k)) throw non_positive("k must be >= 0");
    if (!(cfg.mass > 0.0) || !std::isfinite(cfg.mass)) throw non_positive("mass must be > 0");
}

SystemConfig validate(const json& raw) {
    if (!raw.is_object()) throw malformed("configuration must be a JSON object");
    reject_unknown_keys(raw, {"omega", "k", "mass", "baths"}, "");
    SystemConfig cfg;
    cfg.omega = array_at<3>(raw, "omega", "");
    cfg.coupling_k = number_at(raw, "k", "");
    cfg.mass = number_or(raw, "mass", 1.0, "");
    auto baths = raw.find("baths");
    if (baths == raw.end()) throw missing("baths");
    if (!baths->is_array() || baths->size() != 3) throw malformed("baths must be an array of 3 objects");
    for (int i = 0; i < 3; ++i) {
        const json& b = (*baths)[i];
        const std::string where = "baths[" + std::to_string(i) + "].";
        if (!b.is_object()) throw malformed(where + " must be an object");
        reject_unknown_keys(b, {"kind", "gamma", "omega_c", "T", "r", "theta"}, where);
        auto kind = b.find("kind");
        if (kind == b.end()) throw missing(where + "kind");
        if (!kind->is_string()) throw malformed(where + "kind must be a string");
        BathConfig& out = cfg.baths[i];
        out.kind = spectral_kind_from_string(kind->get<std::string>());
        out.gamma = number_at(b, "gamma", where);
        out.omega_c = number_at(b, "omega_c", where);
        out.temperature = number_at(b, "T", where);
        out.squeeze_r = number_or(b, "r", 0.0, where);
        out.squeeze_theta = number_or(b, "theta", 0.0, where);
    }
    check_invariants(cfg);
    return cfg;
}

ChainPreset preset_from_json(const json& raw) {
    if (!raw.is_object()) throw malformed("preset must be a JSON object");
    reject_unknown_keys(raw,
                        {"kind", "T", "dT_over_T", "DT_over_T", "delta_omega", "k", "omega0",
                         "detuning_weights", "gamma", "omega_c", "mass", "r", "theta"},
                        "preset.");
    ChainPreset p;
    if (raw.contains("kind")) {
        if (!raw["kind"].is_string()) throw malformed("preset.kind must be a string");
        p.kind = spectral_kind_from_string(raw["kind"].get<std::string>());
    }
    const std::string w = "preset.";
    p.temperature = number_or(raw, "T", p.temperature, w);
    p.side_gradient = number_or(raw, "dT_over_T", p.side_gradient, w);
    p.central_gradient = number_or(raw, "DT_over_T", p.central_gradient, w);
    p.detuning = number_or(raw, "delta_omega", p.detuning, w);
    p.coupling_k = number_or(raw, "k", p.coupling_k, w);
    p.base_frequency = number_or(raw, "omega0", p.base_frequency, w);
    p.detuning_weights = array_or<3>(raw, "detuning_weights", p.detuning_weights, w);
    p.gamma = array_or<3>(raw, "gamma", p.gamma, w);
    p.omega_c = number_or(raw, "omega_c", p.omega_c, w);
    p.mass = number_or(raw, "mass", p.mass, w);
    p.squeeze_r = array_or<3>(raw, "r", p.squeeze_r, w);
    p.squeeze_theta = array_or<3>(raw, "theta", p.squeeze_theta, w);
    return p;
}

SystemConfig ChainPreset::to_config() const {
    SystemConfig cfg;
    cfg.coupling_k = coupling_k;
    cfg.mass = mass;
    const std::array<double, 3> temps{temperature * (1.0 + side_gradient),
                                      temperature * (1.0 + central_gradient),
                                      temperature * (1.0 - side_gradient)};
    for (int i = 0; i < 3; ++i) {
        cfg.omega[i] = base_frequency + detuning_weights[i] * detuning;
        cfg.baths[i] = BathConfig{kind, gamma[i], omega_c, temps[i], squeeze_r[i], squeeze_theta[i]};
    }
    check_invariants(cfg);
    return cfg;
}

SystemConfig config_from_document(const json& doc) {
    if (doc.is_object() && doc.contains("preset")) {
        if (doc.size() != 1) {
            for (auto it = doc.begin(); it != doc.end(); ++it)
                if (it.key() != "preset" && (it.key().empty() || it.key()[0] != '_'))
                    throw malformed("a preset document may not carry other keys");
        }
        return preset_from_json(doc["preset"]).to_config();
    }
    return validate(doc);
}

json to_json(const SystemConfig& cfg) {
    json baths = json::array();
    for (const BathConfig& b : cfg.baths) {
        baths.push_back({{"kind", to_string(b.kind)},
                         {"gamma", b.gamma},
                         {"omega_c", b.omega_c},
                         {"T", b.temperature},
                         {"r", b.squeeze_r},
                         {"theta", b.squeeze_theta}});
    }
    return {{"omega", cfg.omega}, {"k", cfg.coupling_k}, {"mass", cfg.mass}, {"baths", baths}};
}

json to_json(const ChainPreset& p) {
    return {{"kind", to_string(p.kind)},
            {"T", p.temperature},
            {"dT_over_T", p.side_gradient},
            {"DT_over_T", p.central_gradient},
            {"delta_omega", p.detuning},
            {"k", p.coupling_k},
            {"omega0", p.base_frequency},
            {"detuning_weights", p.detuning_weights},
            {"gamma", p.gamma},
            {"omega_c", p.omega_c},
            {"mass", p.mass},
            {"r", p.squeeze_r},
            {"theta", p.squeeze_theta}};
}

Eigen::Matrix3d coupling_matrix(double k) {
    if (!(k >= 0.0)) throw std::invalid_argument("spring constant must be >= 0");
    Eigen::Matrix3d U;
    U << k, -k, 0.0,
        -k, 2.0 * k, -k,
        0.0, -k, k;
    return 0.5 * U;
}

SystemConfig to_dimensionless(const PhysicalParams& p) {
    if (!(p.Omega_hz > 0.0)) throw non_positive("Omega must be > 0");
    if (!(p.mass_kg > 0.0)) throw non_positive("mass must be > 0");
    const double energy = codata::hbar * p.Omega_hz;
    SystemConfig cfg;
    cfg.coupling_k = p.coupling_ratio;
    cfg.mass = 1.0;
    for (int i = 0; i < 3; ++i) {
        if (!(p.temperatures_K[i] > 0.0)) throw non_positive("temperatures must be > 0 K");
        cfg.omega[i] = p.omega_ratio[i];
        cfg.baths[i] = BathConfig{p.kinds[i], p.gamma_ratio[i], p.omega_c_ratio,
                                  codata::k_B * p.temperatures_K[i] / energy, p.squeeze_r[i],
                                  p.squeeze_theta[i]};
    }
    check_invariants(cfg);
    return cfg;
}

PhysicalParams to_physical(const SystemConfig& cfg, double Omega_hz, double mass_kg) {
    if (!(Omega_hz > 0.0) || !(mass_kg > 0.0)) throw non_positive("Omega and mass must be > 0");
    check_invariants(cfg);
    PhysicalParams p;
    p.Omega_hz = Omega_hz;
    p.mass_kg = mass_kg * cfg.mass;
    p.coupling_ratio = cfg.coupling_k / cfg.mass;
    p.omega_c_ratio = cfg.baths[0].omega_c;
    const double energy = codata::hbar * Omega_hz;
    for (int i = 0; i < 3; ++i) {
        const BathConfig& b = cfg.baths[i];
        if (b.omega_c != p.omega_c_ratio)
            throw malformed("physical parameterization assumes a common cutoff frequency");
        p.omega_ratio[i] = cfg.omega[i];
        p.kinds[i] = b.kind;
        p.gamma_ratio[i] = b.gamma;
        p.temperatures_K[i] = b.temperature * energy / codata::k_B;
        p.squeeze_r[i] = b.squeeze_r;
        p.squeeze_theta[i] = b.squeeze_theta;
    }
    return p;
}

NormalModes normal_modes(const SystemConfig& cfg) {
    const Eigen::Matrix3d Um = coupling_matrix(cfg.coupling_k) / cfg.mass;
    Eigen::Matrix3d K0 = Um;
    for (int i = 0; i < 3; ++i) K0(i, i) += cfg.omega[i] * cfg.omega[i];
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> static_solver(K0);
    if (static_solver.eigenvalues().minCoeff() <= 0.0)
        throw NegativeEigenvalue("static potential diag(omega^2) + U/m is not positive definite");

    std::array<Susceptibility, 3> sus;
    std::array<double, 3> shift{};
    for (int i = 0; i < 3; ++i) {
        sus[i] = Susceptibility::of(cfg.baths[i], cfg.mass);
        shift[i] = frequency_shift(cfg.baths[i]);
    }
    auto potential_at = [&](double w) {
        Eigen::Matrix3d K = Um;
        for (int i = 0; i < 3; ++i)
            K(i, i) += cfg.omega[i] * cfg.omega[i] + shift[i] - chi_real(sus[i], w) / cfg.mass;
        return K;
    };

    NormalModes modes;
    for (int n = 0; n < 3; ++n) {
        double w = std::sqrt(static_solver.eigenvalues()(n));
        Eigen::Vector3d v = static_solver.eigenvectors().col(n);
        for (int iter = 0; iter < 50; ++iter) {
            Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> solver(potential_at(w));
            const double lambda = solver.eigenvalues()(n);
            if (lambda <= 0.0)
                throw NegativeEigenvalue("effective potential is not positive definite at w = " + std::to_string(w));
            const double next = std::sqrt(lambda);
            v = solver.eigenvectors().col(n);
            const bool done = std::abs(next - w) <= 1e-13 * next;
            w = next;
            if (done) break;
        }
        modes.frequencies[n] = w;
        modes.vectors.col(n) = v;
    }
    return modes;
}

std::array<double, 3> dressed_frequencies(const SystemConfig& cfg) {
    std::array<double, 3> w = normal_modes(cfg).frequencies;
    std::sort(w.begin(), w.end());
    return w;
}

}  // namespace heatchain
