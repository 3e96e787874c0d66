// heatchain: steady states, sweeps, figure presets and correlation scans of the three-oscillator chain

#include <iostream>
#include <thread>

#include "CLI11.hpp"
#include "heatchain/cli.hpp"

int main(int argc, char** argv) {
    using namespace heatchain::cli;
    CLI::App app{"Nonequilibrium steady states of a three-oscillator chain coupled to thermal baths"};
    app.require_subcommand(1);

    Options opt;
    opt.jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    std::string figure;

    auto common = [&](CLI::App* sub) {
        sub->add_option("--out", opt.out, "Output file (steady, sweep, correlate) or directory (figure); default stdout / .");
        sub->add_option("--seed", opt.seed, "Seed for the criterion optimizer restarts")->capture_default_str();
        sub->add_option("--criterion-spec", opt.criterion_dir, "Directory holding t23.json and t33.json");
        sub->add_option("--jobs", opt.jobs, "Worker threads")->check(CLI::PositiveNumber);
    };

    CLI::App* steady = app.add_subcommand("steady", "Evaluate one configuration and write a JSON report");
    steady->add_option("--config", opt.config, "Configuration or preset JSON")->required();
    steady->add_option("--observables", opt.observables, "Comma-separated observables, e.g. \"J,E_N(L,R)\"");
    steady->add_option("--tau-grid", opt.tau_grid, "Lags for K_JJ: start:stop:num or a comma list");
    common(steady);

    CLI::App* sweep = app.add_subcommand("sweep", "Run a parameter sweep and write CSV");
    sweep->add_option("--config", opt.config, "Sweep JSON")->required();
    sweep->add_option("--observables", opt.observables, "Override the sweep outputs");
    sweep->add_option("--tau-grid", opt.tau_grid, "Override the lags for K_JJ");
    common(sweep);

    CLI::App* fig = app.add_subcommand("figure", "Run a shipped figure preset (CSV + gnuplot data)");
    fig->add_option("name", figure, "fig1, fig2, fig3, fig31, fig4 or fig5")->required();
    fig->add_option("--config", opt.config, "Use this figure file instead of the shipped one");
    common(fig);

    CLI::App* corr = app.add_subcommand("correlate", "Total current autocorrelation K_JJ(tau) as CSV");
    corr->add_option("--config", opt.config, "Configuration or preset JSON")->required();
    corr->add_option("--tau-grid", opt.tau_grid, "start:stop:num or a comma list (default 0:30:301)");
    common(corr);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (steady->parsed()) return cmd_steady(opt, std::cerr);
    if (sweep->parsed()) return cmd_sweep(opt, std::cerr);
    if (fig->parsed()) return cmd_figure(figure, opt, std::cerr);
    return cmd_correlate(opt, std::cerr);
}
