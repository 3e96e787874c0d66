#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "heatchain/cli.hpp"

using namespace heatchain;
using namespace heatchain::cli;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("heatchain_cli_" + std::to_string(reinterpret_cast<std::uintptr_t>(this)) +
                                            "_" + std::to_string(std::rand()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string write(const std::string& name, const std::string& text) const {
        std::ofstream(path / name, std::ios::binary) << text;
        return (path / name).string();
    }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const std::string& file) {
    std::ifstream in(file, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

}  // namespace

TEST_CASE("observable parsing") {
    const auto obs = parse_observables(std::string("J, E_N(L,R),D_right(R,C),simon(L,C),K_JJ,T33"));
    REQUIRE(obs.size() == 6);
    CHECK(obs[1].kind == ObservableKind::EN);
    CHECK(obs[1].i == Site::L);
    CHECK(obs[1].j == Site::R);
    CHECK(obs[2].kind == ObservableKind::DRight);
    CHECK(obs[2].name == "D_right(R,C)");
    CHECK_THROWS(parse_observables(std::string("J,bogus")));
    CHECK_THROWS(parse_observables(std::string("E_N(L,L)")));
    CHECK_THROWS(parse_observables(std::string("E_N(L,R")));
}

TEST_CASE("tau grids") {
    CHECK(parse_tau_grid("0:1:3") == std::vector<double>{0.0, 0.5, 1.0});
    CHECK(parse_tau_grid("2") == std::vector<double>{2.0});
    std::vector<std::string> warnings;
    CHECK(parse_tau_grid("0,1,1,2", &warnings) == std::vector<double>{0.0, 1.0, 2.0});
    CHECK(warnings.size() == 1);
    CHECK_THROWS(parse_tau_grid("0:1:0"));
    CHECK_THROWS(parse_tau_grid(""));
    CHECK_THROWS(parse_tau_grid("0,x"));
}

TEST_CASE("number and field formatting") {
    CHECK(format_number(0.5) == "5.0000000000000000e-01");
    CHECK(format_number(-1e-300) == "-1.0000000000000000e-300");
    CHECK(std::stod(format_number(0.1)) == 0.1);
    CHECK(csv_field("plain") == "plain");
    CHECK(csv_field("E_N(L,R)") == "\"E_N(L,R)\"");
    CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
    std::ostringstream out;
    write_csv(out, {"a", "b,c"}, {{"1", ""}});
    CHECK(out.str() == "a,\"b,c\"\r\n1,\r\n");
}

TEST_CASE("set_path") {
    nlohmann::json doc = {{"preset", {{"k", 1.0}, {"r", {0.0, 0.0, 0.0}}}}};
    set_path(doc, "preset.k", 2.0);
    set_path(doc, "preset.r.1", 1.0);
    CHECK(doc["preset"]["k"] == 2.0);
    CHECK(doc["preset"]["r"][1] == 1.0);
    CHECK_THROWS(set_path(doc, "preset.r.7", 1.0));
    CHECK_THROWS(set_path(doc, "", 1.0));
}

TEST_CASE("exit codes") {
    TempDir dir;
    std::ostringstream err;
    Options opt;

    opt.config = dir.write("bad.json", "{\"preset\": {");
    CHECK(cmd_steady(opt, err) == 2);
    CHECK(cmd_correlate(opt, err) == 2);

    opt.config = dir.file("missing.json");
    CHECK(cmd_steady(opt, err) == 2);

    opt.config = dir.write("unknown_key.json", "{\"preset\": {\"kappa\": 1}}");
    CHECK(cmd_steady(opt, err) == 2);

    opt.config = dir.write("low_cutoff.json", "{\"preset\": {\"omega_c\": 0.1, \"k\": 1.8}}");
    opt.out = dir.file("low.json");
    err.str("");
    CHECK(cmd_steady(opt, err) == 3);
    CHECK(err.str().find("bound mode") != std::string::npos);

    opt.config = dir.write("ok.json", "{\"preset\": {\"k\": 1.8, \"delta_omega\": 0.5}}");
    opt.tau_grid = "1:0:0";
    CHECK(cmd_correlate(opt, err) == 2);
    opt.tau_grid.clear();
    opt.observables = "J,nonsense";
    CHECK(cmd_steady(opt, err) == 2);

    opt.out = dir.file("figs");
    CHECK(cmd_figure("fig9", opt, err) == 2);
    opt.observables.clear();

    opt.config = dir.write("sweep_bad_path.json",
                           R"J({"base": {"preset": {}}, "axes": [{"path": "preset.nope.x", "values": [1]}], "outputs": ["J"]})J");
    opt.out = dir.file("s.csv");
    CHECK(cmd_sweep(opt, err) == 2);

    opt.config = dir.write("sweep_all_fail.json",
                           R"J({"base": {"preset": {"omega_c": 0.1}}, "axes": [{"path": "preset.k", "values": [1.8, 2.0]}], "outputs": ["J"]})J");
    CHECK(cmd_sweep(opt, err) == 3);
}

TEST_CASE("steady report") {
    TempDir dir;
    std::ostringstream err;
    Options opt;
    opt.config = dir.write("ok.json", "{\"preset\": {\"k\": 1.8, \"delta_omega\": 0.5, \"DT_over_T\": -0.9}}");
    opt.out = dir.file("ss.json");
    opt.observables = "J,E_N(L,R),K_JJ";
    opt.tau_grid = "0,1,1";
    REQUIRE(cmd_steady(opt, err) == 0);
    CHECK(err.str().find("duplicate tau") != std::string::npos);
    const auto doc = nlohmann::json::parse(slurp(opt.out));
    CHECK(doc["V"].size() == 36);
    CHECK(doc["physicality"]["physical"] == true);
    CHECK(doc["stationarity"]["passed"] == true);
    CHECK(doc["observables"].contains("J"));
    CHECK(doc["observables"].contains("E_N(L,R)"));
    CHECK(doc["observables"].contains("K_JJ(tau=1)"));
    CHECK(doc["observables"]["K_JJ(tau=0)"].get<double>() >= 0.0);
}

TEST_CASE("correlate at a single lag") {
    TempDir dir;
    std::ostringstream err;
    Options opt;
    opt.config = dir.write("ok.json", "{\"preset\": {\"k\": 1.8, \"delta_omega\": 0.5}}");
    opt.out = dir.file("k.csv");
    opt.tau_grid = "0";
    REQUIRE(cmd_correlate(opt, err) == 0);
    std::istringstream lines(slurp(opt.out));
    std::string header, row, extra;
    std::getline(lines, header);
    std::getline(lines, row);
    CHECK(header == "tau,K_JJ,K_JJ_error\r");
    CHECK_FALSE(std::getline(lines, extra));
    const double k = std::stod(row.substr(row.find(',') + 1));
    CHECK(k >= 0.0);
}

TEST_CASE("sweep output does not depend on the worker count") {
    TempDir dir;
    std::ostringstream err;
    Options opt;
    opt.config = dir.write("sweep.json", R"J({
        "base": {"preset": {"k": 1.8, "delta_omega": 0.5}},
        "axes": [{"path": "preset.DT_over_T", "range": {"start": -0.9, "stop": 2.0, "num": 5}},
                 {"path": "preset.k", "values": [1.0, 2.0]}],
        "variants": [{"label": "ohmic", "set": {"preset.kind": "ohmic"}},
                     {"label": "super-ohmic", "set": {"preset.kind": "super-ohmic"}}],
        "outputs": ["J", "E_N(R,C)", "D_right(R,L)"]})J");
    opt.jobs = 1;
    opt.out = dir.file("one.csv");
    REQUIRE(cmd_sweep(opt, err) == 0);
    opt.jobs = 4;
    opt.out = dir.file("four.csv");
    REQUIRE(cmd_sweep(opt, err) == 0);
    const std::string one = slurp(dir.file("one.csv"));
    CHECK(one == slurp(dir.file("four.csv")));
    CHECK(std::count(one.begin(), one.end(), '\n') == 21);
    CHECK(one.rfind("variant,preset.DT_over_T,preset.k,J,", 0) == 0);
}

TEST_CASE("shipped figure presets parse") {
    for (const char* name : {"fig1", "fig2", "fig3", "fig31", "fig4", "fig5"}) {
        CAPTURE(name);
        const auto doc = nlohmann::json::parse(slurp(default_data_dir() + "/presets/" + name + ".json"));
        REQUIRE(doc["runs"].is_array());
        for (const auto& run : doc["runs"]) {
            if (run.value("type", "sweep") == "correlate") continue;
            const SweepSpec spec = sweep_from_json(run);
            CHECK_FALSE(spec.outputs.empty());
            CHECK_FALSE(spec.axes.empty());
        }
    }
}

TEST_CASE("figure run writes csv and gnuplot data") {
    TempDir dir;
    std::ostringstream err;
    Options opt;
    opt.out = dir.file("out");
    opt.config = dir.write("fig.json", R"J({"runs": [
        {"name": "small", "base": {"preset": {"k": 1.8, "delta_omega": 0.5}},
         "axes": [{"path": "preset.DT_over_T", "values": [-0.9, 1.0]}, {"path": "preset.k", "values": [1.0, 2.0]}],
         "outputs": ["J"]},
        {"name": "trace", "type": "correlate", "base": {"preset": {"k": 1.8}},
         "series": {"path": "preset.DT_over_T", "values": [0.0, 1.0]}, "tau_grid": [0.0, 0.5]}]})J");
    REQUIRE(cmd_figure("fig1", opt, err) == 0);
    CHECK(fs::exists(dir.path / "out" / "small.csv"));
    CHECK(fs::exists(dir.path / "out" / "trace.csv"));
    const std::string dat = slurp((dir.path / "out" / "small.dat").string());
    CHECK(dat.rfind("#", 0) == 0);
    CHECK(dat.find("\n\n") != std::string::npos);
}
