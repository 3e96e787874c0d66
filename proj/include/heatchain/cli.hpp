// cli.hpp: observables, sweeps, figure runs and correlation scans behind the command-line driver

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "heatchain/criterion.hpp"
#include "heatchain/steady.hpp"
#include "json.hpp"

namespace heatchain::cli {

enum class ObservableKind { V, jCL, jRC, J, Hint, KJJ, EN, DLeft, DRight, Simon, T23, T33 };

struct Observable {
    ObservableKind kind = ObservableKind::J;
    Site i = Site::L;
    Site j = Site::R;
    std::string name;
};

// Comma-separated names, e.g. "J,E_N(L,R),T33"; commas inside parentheses belong to the name.
std::vector<Observable> parse_observables(const std::string& list);
std::vector<Observable> parse_observables(const nlohmann::json& names);

// "start:stop:num" or a comma-separated list; repeated values are dropped with a warning.
std::vector<double> parse_tau_grid(const std::string& text, std::vector<std::string>* warnings = nullptr);
std::vector<double> tau_grid_from_json(const nlohmann::json& grid, std::vector<std::string>* warnings = nullptr);

struct EvalContext {
    std::vector<double> taus{0.0};
    std::uint64_t seed = 1;
    std::string criterion_dir;
    std::optional<CriterionSpec> t23;
    std::optional<CriterionSpec> t33;

    // Loads the criterion data that the observables need.
    void prepare(const std::vector<Observable>& obs);
};

std::vector<std::string> observable_columns(const std::vector<Observable>& obs, const EvalContext& ctx);

struct PointValues {
    std::vector<double> values;
    double quadrature_error = 0.0;
    double min_uncertainty_eigenvalue = 0.0;
};

PointValues evaluate(const SteadyState& ss, const std::vector<Observable>& obs, const EvalContext& ctx);

// Total current autocorrelation from one block and its first-order quadrature error.
std::pair<double, double> total_correlation_with_error(const CorrelationBlock& block, double k, double mass);

// Locale-independent scientific notation with 17 significant digits.
std::string format_number(double v);
std::string csv_field(const std::string& s);

struct Axis {
    std::string path;
    std::vector<nlohmann::json> values;
};

struct Variant {
    std::string label;
    nlohmann::json set = nlohmann::json::object();
};

struct SweepSpec {
    nlohmann::json base;
    std::vector<Axis> axes;
    std::vector<Variant> variants;
    std::vector<Observable> outputs;
    std::vector<double> taus{0.0};
};

SweepSpec sweep_from_json(const nlohmann::json& doc);

// Sets a dotted path ("preset.DT_over_T", "baths.1.T") in a configuration document.
void set_path(nlohmann::json& doc, const std::string& path, const nlohmann::json& value);

struct SweepTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::size_t axis_columns = 0;
    bool has_variant = false;
    std::size_t succeeded = 0;
};

SweepTable run_sweep_table(const SweepSpec& spec, EvalContext ctx, int jobs);

void write_csv(std::ostream& out, const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows);
void write_dat(std::ostream& out, const SweepTable& table);

struct Options {
    std::string config;
    std::string out;
    std::string observables;
    std::string tau_grid;
    std::string criterion_dir;
    std::uint64_t seed = 1;
    int jobs = 1;
};

int cmd_steady(const Options& opt, std::ostream& err);
int cmd_sweep(const Options& opt, std::ostream& err);
int cmd_figure(const std::string& name, const Options& opt, std::ostream& err);
int cmd_correlate(const Options& opt, std::ostream& err);

std::string default_data_dir();

}  // namespace heatchain::cli
