// cli.cpp: observables, sweeps, figure runs and correlation scans behind the command-line driver

#include "heatchain/cli.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <thread>

#include "heatchain/errors.hpp"
#include "heatchain/measures.hpp"
#include "heatchain/transport.hpp"

namespace heatchain::cli {

using nlohmann::json;

namespace {

ConfigError malformed(const std::string& what) { return ConfigError(ConfigError::Code::Malformed, what); }

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

Site parse_site(const std::string& s) {
    const std::string t = trim(s);
    if (t == "L") return Site::L;
    if (t == "C") return Site::C;
    if (t == "R") return Site::R;
    throw malformed("unknown site '" + t + "' (expected L, C or R)");
}

std::string shortest(double v) {
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

Observable parse_one(const std::string& raw) {
    const std::string s = trim(raw);
    Observable o;
    static const std::vector<std::pair<std::string, ObservableKind>> scalars{
        {"V", ObservableKind::V},     {"j_CL", ObservableKind::jCL}, {"j_RC", ObservableKind::jRC},
        {"J", ObservableKind::J},     {"H_int", ObservableKind::Hint}, {"K_JJ", ObservableKind::KJJ},
        {"T23", ObservableKind::T23}, {"T33", ObservableKind::T33}};
    for (const auto& [name, kind] : scalars) {
        if (s == name) {
            o.kind = kind;
            o.name = name;
            return o;
        }
    }
    static const std::vector<std::pair<std::string, ObservableKind>> pairs{{"E_N", ObservableKind::EN},
                                                                             {"D_left", ObservableKind::DLeft},
                                                                             {"D_right", ObservableKind::DRight},
                                                                             {"simon", ObservableKind::Simon}};
    const auto open = s.find('(');
    if (open != std::string::npos && s.back() == ')') {
        const std::string head = trim(s.substr(0, open));
        const std::string inner = s.substr(open + 1, s.size() - open - 2);
        const auto comma = inner.find(',');
        for (const auto& [name, kind] : pairs) {
            if (head != name) continue;
            if (comma == std::string::npos) throw malformed("observable " + s + " needs a pair of sites");
            o.kind = kind;
            o.i = parse_site(inner.substr(0, comma));
            o.j = parse_site(inner.substr(comma + 1));
            if (o.i == o.j) throw malformed("observable " + s + " needs two distinct sites");
            o.name = name + "(" + site_name(o.i) + "," + site_name(o.j) + ")";
            return o;
        }
    }
    throw malformed("unknown observable '" + s + "'");
}

template <class F>
void parallel_for(std::size_t n, int jobs, F&& body) {
    const std::size_t workers = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, jobs)));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) body(i);
        });
    for (auto& t : pool) t.join();
}

std::vector<double> linear_range(const json& r) {
    if (!r.is_object() || !r.contains("start") || !r.contains("stop") || !r.contains("num"))
        throw malformed("range needs start, stop and num");
    if (!r["start"].is_number() || !r["stop"].is_number() || !r["num"].is_number_integer())
        throw malformed("range start/stop must be numbers and num an integer");
    const double a = r["start"].get<double>(), b = r["stop"].get<double>();
    const long n = r["num"].get<long>();
    if (n < 1) throw malformed("range num must be at least 1");
    std::vector<double> v(static_cast<std::size_t>(n));
    for (long i = 0; i < n; ++i) v[i] = n == 1 ? a : a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
    return v;
}

std::vector<double> dedupe(const std::vector<double>& in, std::vector<std::string>* warnings) {
    std::vector<double> out;
    std::set<double> seen;
    for (double t : in) {
        if (!std::isfinite(t)) throw malformed("tau grid values must be finite");
        if (!seen.insert(t).second) {
            if (warnings) warnings->push_back("duplicate tau " + shortest(t) + " removed");
            continue;
        }
        out.push_back(t);
    }
    if (out.empty()) throw malformed("tau grid is empty");
    return out;
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(ConfigError::Code::MissingField, "cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw malformed(path + ": " + e.what());
    }
}

class Output {
public:
    explicit Output(const std::string& path) {
        if (!path.empty() && path != "-") {
            const auto parent = std::filesystem::path(path).parent_path();
            if (!parent.empty()) std::filesystem::create_directories(parent);
            file_.open(path, std::ios::binary);
            if (!file_) throw ConfigError(ConfigError::Code::Malformed, "cannot write " + path);
        }
    }
    std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

private:
    std::ofstream file_;
};

int exit_code_for(const std::exception_ptr& e, std::ostream& err) {
    try {
        std::rethrow_exception(e);
    } catch (const ConfigError& x) {
        err << "error: " << x.what() << "\n";
        return 2;
    } catch (const NumericalError& x) {
        err << "numerical error: " << x.what() << "\n";
        return 3;
    } catch (const json::exception& x) {
        err << "error: " << x.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& x) {
        err << "error: " << x.what() << "\n";
        return 2;
    } catch (const std::exception& x) {
        err << "error: " << x.what() << "\n";
        return 3;
    }
}

std::string describe(const std::exception_ptr& e) {
    try {
        std::rethrow_exception(e);
    } catch (const ConfigError& x) {
        return std::string("config: ") + x.what();
    } catch (const NumericalError& x) {
        return std::string("numerical: ") + x.what();
    } catch (const std::exception& x) {
        return x.what();
    }
}

std::string axis_value_text(const json& v) { return v.is_string() ? v.get<std::string>() : format_number(v.get<double>()); }

double total_correlation(const CorrelationBlock& b, double k, double mass) {
    double s = 0.0;
    for (Pair p1 : {Pair::CL, Pair::RC})
        for (Pair p2 : {Pair::CL, Pair::RC}) s += current_correlation(b, k, mass, p1, p2);
    return s;
}

SystemConfig checked_config(const json& doc) {
    const SystemConfig cfg = config_from_document(doc);
    const StationarityReport rep = stationarity_check(cfg);
    if (!rep.passed) throw StationarityViolation("stationarity check failed: " + rep.to_json().dump());
    return cfg;
}

}  // namespace

std::vector<Observable> parse_observables(const std::string& list) {
    std::vector<Observable> out;
    std::string cur;
    int depth = 0;
    for (char c : list) {
        if (c == '(') ++depth;
        if (c == ')') --depth;
        if (c == ',' && depth == 0) {
            if (!trim(cur).empty()) out.push_back(parse_one(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!trim(cur).empty()) out.push_back(parse_one(cur));
    if (out.empty()) throw malformed("no observables requested");
    return out;
}

std::vector<Observable> parse_observables(const json& names) {
    if (names.is_string()) return parse_observables(names.get<std::string>());
    if (!names.is_array() || names.empty()) throw malformed("outputs must be a nonempty array of observable names");
    std::vector<Observable> out;
    for (const json& n : names) {
        if (!n.is_string()) throw malformed("observable names must be strings");
        out.push_back(parse_one(n.get<std::string>()));
    }
    return out;
}

std::vector<double> parse_tau_grid(const std::string& text, std::vector<std::string>* warnings) {
    const std::string t = trim(text);
    if (t.empty()) throw malformed("tau grid is empty");
    auto number = [](const std::string& s) {
        const std::string u = trim(s);
        double v = 0.0;
        const auto r = std::from_chars(u.data(), u.data() + u.size(), v);
        if (r.ec != std::errc() || r.ptr != u.data() + u.size()) throw malformed("bad number '" + u + "' in tau grid");
        return v;
    };
    if (t.find(':') != std::string::npos) {
        std::vector<std::string> parts;
        std::stringstream ss(t);
        for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
        if (parts.size() != 3) throw malformed("tau grid range must be start:stop:num");
        const double n = number(parts[2]);
        if (n != std::floor(n)) throw malformed("tau grid num must be an integer");
        return dedupe(linear_range(json{{"start", number(parts[0])}, {"stop", number(parts[1])}, {"num", static_cast<long>(n)}}),
                      warnings);
    }
    std::vector<double> v;
    std::stringstream ss(t);
    for (std::string p; std::getline(ss, p, ',');) v.push_back(number(p));
    return dedupe(v, warnings);
}

std::vector<double> tau_grid_from_json(const json& grid, std::vector<std::string>* warnings) {
    if (grid.is_string()) return parse_tau_grid(grid.get<std::string>(), warnings);
    if (grid.is_object()) return dedupe(linear_range(grid), warnings);
    if (grid.is_array()) {
        std::vector<double> v;
        for (const json& x : grid) {
            if (!x.is_number()) throw malformed("tau grid entries must be numbers");
            v.push_back(x.get<double>());
        }
        return dedupe(v, warnings);
    }
    throw malformed("tau grid must be a string, a range object or an array");
}

void EvalContext::prepare(const std::vector<Observable>& obs) {
    const std::string dir = criterion_dir.empty() ? default_data_dir() + "/criteria" : criterion_dir;
    for (const Observable& o : obs) {
        if (o.kind == ObservableKind::T23 && !t23) t23 = load_criterion_spec(dir + "/t23.json");
        if (o.kind == ObservableKind::T33 && !t33) t33 = load_criterion_spec(dir + "/t33.json");
    }
}

std::vector<std::string> observable_columns(const std::vector<Observable>& obs, const EvalContext& ctx) {
    std::vector<std::string> cols;
    for (const Observable& o : obs) {
        if (o.kind == ObservableKind::V) {
            for (int a = 0; a < 6; ++a)
                for (int b = 0; b < 6; ++b)
                    cols.push_back("V(" + op_name(static_cast<Op>(a)) + "," + op_name(static_cast<Op>(b)) + ")");
        } else if (o.kind == ObservableKind::KJJ) {
            for (double t : ctx.taus) cols.push_back("K_JJ(tau=" + shortest(t) + ")");
            for (double t : ctx.taus) cols.push_back("K_JJ_error(tau=" + shortest(t) + ")");
        } else {
            cols.push_back(o.name);
        }
    }
    return cols;
}

std::pair<double, double> total_correlation_with_error(const CorrelationBlock& block, double k, double mass) {
    const double K = total_correlation(block, k, mass);
    // K is quadratic in the block entries, so central differences give the exact gradient.
    double slope = 0.0;
    CorrelationBlock probe = block;
    for (int m = 0; m < 2; ++m) {
        Matrix6d& M = m == 0 ? probe.C : probe.y;
        for (int a = 0; a < 6; ++a)
            for (int b = 0; b < 6; ++b) {
                const double keep = M(a, b);
                const double h = 1e-3 * (1.0 + std::abs(keep));
                M(a, b) = keep + h;
                const double up = total_correlation(probe, k, mass);
                M(a, b) = keep - h;
                const double down = total_correlation(probe, k, mass);
                M(a, b) = keep;
                slope += std::abs(up - down) / (2.0 * h);
            }
    }
    return {K, slope * block.error};
}

PointValues evaluate(const SteadyState& ss, const std::vector<Observable>& obs, const EvalContext& ctx) {
    PointValues out;
    const CovarianceMatrix cov = ss.covariance();
    const SystemConfig& cfg = ss.config();
    out.quadrature_error = cov.error;
    out.min_uncertainty_eigenvalue = cov.min_uncertainty_eigenvalue;
    auto criterion = [&](const std::optional<CriterionSpec>& spec) {
        if (!spec) throw std::logic_error("criterion data not loaded");
        OptimizerBudget budget;
        budget.seed = ctx.seed;
        return optimize_criterion(cov.V, *spec, budget).value;
    };
    for (const Observable& o : obs) {
        switch (o.kind) {
            case ObservableKind::V:
                for (int a = 0; a < 6; ++a)
                    for (int b = 0; b < 6; ++b) out.values.push_back(cov.V(a, b));
                break;
            case ObservableKind::jCL: out.values.push_back(mean_pair_current(cov, cfg.coupling_k, cfg.mass, Site::C, Site::L)); break;
            case ObservableKind::jRC: out.values.push_back(mean_pair_current(cov, cfg.coupling_k, cfg.mass, Site::R, Site::C)); break;
            case ObservableKind::J:
                out.values.push_back(mean_pair_current(cov, cfg.coupling_k, cfg.mass, Site::C, Site::L) +
                                     mean_pair_current(cov, cfg.coupling_k, cfg.mass, Site::R, Site::C));
                break;
            case ObservableKind::Hint: out.values.push_back(interaction_energy(cov, cfg.coupling_k)); break;
            case ObservableKind::KJJ: {
                std::vector<double> errs;
                for (double t : ctx.taus) {
                    const auto [K, e] = total_correlation_with_error(ss.block(t), cfg.coupling_k, cfg.mass);
                    out.values.push_back(K);
                    errs.push_back(e);
                }
                out.values.insert(out.values.end(), errs.begin(), errs.end());
                break;
            }
            case ObservableKind::EN: out.values.push_back(log_negativity(reduce_two_mode(cov, o.i, o.j))); break;
            case ObservableKind::DLeft: out.values.push_back(gaussian_discord_left(reduce_two_mode(cov, o.i, o.j))); break;
            case ObservableKind::DRight: out.values.push_back(gaussian_discord_right(reduce_two_mode(cov, o.i, o.j))); break;
            case ObservableKind::Simon: out.values.push_back(simon_witness(reduce_two_mode(cov, o.i, o.j)).value); break;
            case ObservableKind::T23: out.values.push_back(criterion(ctx.t23)); break;
            case ObservableKind::T33: out.values.push_back(criterion(ctx.t33)); break;
        }
    }
    return out;
}

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::scientific, 16);
    return std::string(buf, r.ptr);
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    return q + "\"";
}

void set_path(json& doc, const std::string& path, const json& value) {
    if (path.empty()) throw malformed("empty parameter path");
    json* node = &doc;
    std::stringstream ss(path);
    std::vector<std::string> parts;
    for (std::string p; std::getline(ss, p, '.');) parts.push_back(p);
    for (std::size_t n = 0; n < parts.size(); ++n) {
        const std::string& key = parts[n];
        if (key.empty()) throw malformed("bad parameter path '" + path + "'");
        json* child = nullptr;
        if (node->is_array()) {
            std::size_t idx = 0;
            const auto r = std::from_chars(key.data(), key.data() + key.size(), idx);
            if (r.ec != std::errc() || r.ptr != key.data() + key.size() || idx >= node->size())
                throw malformed("path '" + path + "': bad array index '" + key + "'");
            child = &(*node)[idx];
        } else if (node->is_object()) {
            if (n + 1 < parts.size() && !node->contains(key)) throw malformed("path '" + path + "': no member '" + key + "'");
            child = &(*node)[key];
        } else {
            throw malformed("path '" + path + "' descends into a scalar");
        }
        node = child;
    }
    *node = value;
}

SweepSpec sweep_from_json(const json& doc) {
    if (!doc.is_object()) throw malformed("sweep document must be an object");
    for (const auto& [key, _] : doc.items())
        if (key.rfind('_', 0) != 0 && key != "base" && key != "axes" && key != "outputs" && key != "tau_grid" &&
            key != "variants" && key != "name" && key != "type")
            throw malformed("unknown sweep key '" + key + "'");
    if (!doc.contains("base")) throw ConfigError(ConfigError::Code::MissingField, "sweep needs a base configuration");
    if (!doc.contains("outputs")) throw ConfigError(ConfigError::Code::MissingField, "sweep needs outputs");
    SweepSpec s;
    s.base = doc["base"];
    if (!s.base.is_object()) throw malformed("base must be an object");
    s.outputs = parse_observables(doc["outputs"]);
    if (doc.contains("tau_grid")) s.taus = tau_grid_from_json(doc["tau_grid"]);
    if (doc.contains("axes")) {
        if (!doc["axes"].is_array()) throw malformed("axes must be an array");
        if (doc["axes"].size() > 2) throw malformed("a sweep has at most two axes");
        for (const json& a : doc["axes"]) {
            if (!a.is_object() || !a.contains("path") || !a["path"].is_string()) throw malformed("axis needs a path");
            Axis ax;
            ax.path = a["path"].get<std::string>();
            if (a.contains("range")) {
                for (double v : linear_range(a["range"])) ax.values.emplace_back(v);
            } else if (a.contains("values") && a["values"].is_array()) {
                for (const json& v : a["values"]) {
                    if (!(v.is_string() || (v.is_number() && std::isfinite(v.get<double>()))))
                        throw malformed("axis values must be finite numbers or strings");
                    ax.values.push_back(v);
                }
            } else {
                throw malformed("axis '" + ax.path + "' needs values or range");
            }
            if (ax.values.empty()) throw malformed("axis '" + ax.path + "' has an empty grid");
            s.axes.push_back(std::move(ax));
        }
    }
    if (doc.contains("variants")) {
        if (!doc["variants"].is_array() || doc["variants"].empty()) throw malformed("variants must be a nonempty array");
        for (const json& v : doc["variants"]) {
            if (!v.is_object() || !v.contains("label") || !v["label"].is_string()) throw malformed("variant needs a label");
            Variant var;
            var.label = v["label"].get<std::string>();
            if (v.contains("set")) {
                if (!v["set"].is_object()) throw malformed("variant set must be an object");
                var.set = v["set"];
            }
            s.variants.push_back(std::move(var));
        }
    }
    // surface path errors before any work starts
    json probe = s.base;
    for (const Variant& v : s.variants)
        for (const auto& [path, value] : v.set.items()) set_path(probe, path, value);
    for (const Axis& a : s.axes) set_path(probe, a.path, a.values.front());
    return s;
}

SweepTable run_sweep_table(const SweepSpec& spec, EvalContext ctx, int jobs) {
    ctx.taus = spec.taus;
    ctx.prepare(spec.outputs);

    SweepTable t;
    t.has_variant = !spec.variants.empty();
    if (t.has_variant) t.header.push_back("variant");
    for (const Axis& a : spec.axes) t.header.push_back(a.path);
    t.axis_columns = spec.axes.size();
    const std::vector<std::string> cols = observable_columns(spec.outputs, ctx);
    t.header.insert(t.header.end(), cols.begin(), cols.end());
    t.header.push_back("quadrature_error");
    t.header.push_back("min_uncertainty_eigenvalue");
    t.header.push_back("error");

    struct Point {
        json doc;
        std::vector<std::string> lead;
    };
    std::vector<Point> points;
    const std::vector<Variant> variants = spec.variants.empty() ? std::vector<Variant>{Variant{}} : spec.variants;
    const std::size_t n0 = spec.axes.size() > 0 ? spec.axes[0].values.size() : 1;
    const std::size_t n1 = spec.axes.size() > 1 ? spec.axes[1].values.size() : 1;
    for (const Variant& v : variants) {
        json base = spec.base;
        for (const auto& [path, value] : v.set.items()) set_path(base, path, value);
        for (std::size_t i = 0; i < n0; ++i)
            for (std::size_t j = 0; j < n1; ++j) {
                Point p{base, {}};
                if (t.has_variant) p.lead.push_back(v.label);
                if (spec.axes.size() > 0) {
                    set_path(p.doc, spec.axes[0].path, spec.axes[0].values[i]);
                    p.lead.push_back(axis_value_text(spec.axes[0].values[i]));
                }
                if (spec.axes.size() > 1) {
                    set_path(p.doc, spec.axes[1].path, spec.axes[1].values[j]);
                    p.lead.push_back(axis_value_text(spec.axes[1].values[j]));
                }
                points.push_back(std::move(p));
            }
    }

    t.rows.resize(points.size());
    std::vector<char> ok(points.size(), 0);
    parallel_for(points.size(), jobs, [&](std::size_t n) {
        std::vector<std::string> row = points[n].lead;
        try {
            const SteadyState ss(checked_config(points[n].doc));
            const PointValues pv = evaluate(ss, spec.outputs, ctx);
            for (double v : pv.values) row.push_back(format_number(v));
            row.push_back(format_number(pv.quadrature_error));
            row.push_back(format_number(pv.min_uncertainty_eigenvalue));
            row.emplace_back();
            ok[n] = 1;
        } catch (...) {
            row.resize(points[n].lead.size() + cols.size() + 2);
            row.push_back(describe(std::current_exception()));
        }
        t.rows[n] = std::move(row);
    });
    t.succeeded = static_cast<std::size_t>(std::count(ok.begin(), ok.end(), 1));
    return t;
}

void write_csv(std::ostream& out, const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows) {
    auto line = [&](const std::vector<std::string>& fields) {
        for (std::size_t i = 0; i < fields.size(); ++i) out << (i ? "," : "") << csv_field(fields[i]);
        out << "\r\n";
    };
    line(header);
    for (const auto& r : rows) line(r);
}

void write_dat(std::ostream& out, const SweepTable& table) {
    const std::size_t first = table.has_variant ? 1 : 0;
    const std::size_t last = table.header.size() - 1;  // drop the error text
    out << "#";
    for (std::size_t c = first; c < last; ++c) out << ' ' << table.header[c];
    out << '\n';
    std::string variant, outer;
    bool started = false;
    for (const auto& r : table.rows) {
        if (table.has_variant && (!started || r[0] != variant)) {
            if (started) out << "\n\n";
            out << "# variant: " << r[0] << '\n';
            variant = r[0];
            outer.clear();
        } else if (table.axis_columns == 2 && started && r[first] != outer) {
            out << '\n';
        }
        if (table.axis_columns == 2) outer = r[first];
        started = true;
        for (std::size_t c = first; c < last; ++c) out << (c == first ? "" : " ") << (r[c].empty() ? "nan" : r[c]);
        out << '\n';
    }
}

std::string default_data_dir() { return HEATCHAIN_DATA_DIR; }

int cmd_steady(const Options& opt, std::ostream& err) {
    try {
        if (opt.config.empty()) throw ConfigError(ConfigError::Code::MissingField, "steady needs --config");
        const SystemConfig cfg = config_from_document(read_json_file(opt.config));
        const StationarityReport rep = stationarity_check(cfg);
        if (!rep.passed) {
            err << "stationarity check failed:\n" << rep.to_json().dump(2) << "\n";
            return 3;
        }
        const std::vector<Observable> obs = parse_observables(opt.observables.empty() ? "j_CL,j_RC,J,H_int" : opt.observables);
        EvalContext ctx;
        ctx.seed = opt.seed;
        ctx.criterion_dir = opt.criterion_dir;
        std::vector<std::string> warnings;
        if (!opt.tau_grid.empty()) ctx.taus = parse_tau_grid(opt.tau_grid, &warnings);
        for (const auto& w : warnings) err << "warning: " << w << "\n";
        ctx.prepare(obs);

        const SteadyState ss(cfg);
        const CovarianceMatrix cov = ss.covariance();
        const PointValues pv = evaluate(ss, obs, ctx);
        const std::vector<std::string> cols = observable_columns(obs, ctx);

        json doc;
        doc["config"] = to_json(cfg);
        doc["V"] = json::array();
        for (int a = 0; a < 6; ++a)
            for (int b = 0; b < 6; ++b) doc["V"].push_back(cov.V(a, b));
        json values = json::object();
        for (std::size_t c = 0; c < cols.size(); ++c)
            if (cols[c].rfind("V(", 0) != 0) values[cols[c]] = pv.values[c];
        doc["observables"] = values;
        const CorrelationBlock b0 = ss.block(0.0);
        doc["quadrature"] = {{"covariance_error", cov.error},
                             {"imaginary_residue", b0.imaginary_residue},
                             {"panels", b0.panels},
                             {"evaluations", b0.evaluations}};
        doc["stationarity"] = rep.to_json();
        json pairs = json::object();
        bool physical = cov.min_uncertainty_eigenvalue >= -1e-9;
        for (auto [i, j] : {std::pair{Site::L, Site::C}, std::pair{Site::L, Site::R}, std::pair{Site::C, Site::R}}) {
            const double nu = symplectic_eigenvalues(reduce_two_mode(cov, i, j).sigma)(0);
            pairs[std::string(site_name(i)) + site_name(j)] = {{"min_symplectic_eigenvalue", nu}, {"physical", nu >= 1.0 - 1e-9}};
            physical = physical && nu >= 1.0 - 1e-9;
        }
        doc["physicality"] = {{"min_uncertainty_eigenvalue", cov.min_uncertainty_eigenvalue},
                              {"uncertainty_ok", cov.min_uncertainty_eigenvalue >= -1e-9},
                              {"pairs", pairs},
                              {"physical", physical}};
        Output out(opt.out);
        out.stream() << doc.dump(2) << "\n";
        return 0;
    } catch (...) {
        return exit_code_for(std::current_exception(), err);
    }
}

int cmd_sweep(const Options& opt, std::ostream& err) {
    try {
        if (opt.config.empty()) throw ConfigError(ConfigError::Code::MissingField, "sweep needs --config");
        SweepSpec spec = sweep_from_json(read_json_file(opt.config));
        if (!opt.observables.empty()) spec.outputs = parse_observables(opt.observables);
        std::vector<std::string> warnings;
        if (!opt.tau_grid.empty()) spec.taus = parse_tau_grid(opt.tau_grid, &warnings);
        for (const auto& w : warnings) err << "warning: " << w << "\n";
        EvalContext ctx;
        ctx.seed = opt.seed;
        ctx.criterion_dir = opt.criterion_dir;
        const SweepTable t = run_sweep_table(spec, ctx, opt.jobs);
        Output out(opt.out);
        write_csv(out.stream(), t.header, t.rows);
        if (t.succeeded < t.rows.size()) err << "warning: " << t.rows.size() - t.succeeded << " of " << t.rows.size() << " points failed\n";
        if (t.succeeded == 0) {
            err << "error: no grid point succeeded\n";
            return 3;
        }
        return 0;
    } catch (...) {
        return exit_code_for(std::current_exception(), err);
    }
}

int cmd_correlate(const Options& opt, std::ostream& err) {
    try {
        if (opt.config.empty()) throw ConfigError(ConfigError::Code::MissingField, "correlate needs --config");
        std::vector<std::string> warnings;
        const std::vector<double> taus = parse_tau_grid(opt.tau_grid.empty() ? "0:30:301" : opt.tau_grid, &warnings);
        for (const auto& w : warnings) err << "warning: " << w << "\n";
        const SystemConfig cfg = checked_config(read_json_file(opt.config));
        const SteadyState ss(cfg);
        std::vector<std::pair<double, double>> k(taus.size());
        parallel_for(taus.size(), opt.jobs, [&](std::size_t n) {
            k[n] = total_correlation_with_error(ss.block(taus[n]), cfg.coupling_k, cfg.mass);
        });
        std::vector<std::vector<std::string>> rows;
        for (std::size_t n = 0; n < taus.size(); ++n)
            rows.push_back({format_number(taus[n]), format_number(k[n].first), format_number(k[n].second)});
        Output out(opt.out);
        write_csv(out.stream(), {"tau", "K_JJ", "K_JJ_error"}, rows);
        return 0;
    } catch (...) {
        return exit_code_for(std::current_exception(), err);
    }
}

int cmd_figure(const std::string& name, const Options& opt, std::ostream& err) {
    static const std::set<std::string> known{"fig1", "fig2", "fig3", "fig31", "fig4", "fig5"};
    try {
        if (!known.count(name)) throw malformed("unknown figure '" + name + "' (expected fig1, fig2, fig3, fig31, fig4 or fig5)");
        const std::string file = opt.config.empty() ? default_data_dir() + "/presets/" + name + ".json" : opt.config;
        const json doc = read_json_file(file);
        if (!doc.contains("runs") || !doc["runs"].is_array() || doc["runs"].empty())
            throw malformed(file + ": needs a nonempty runs array");
        const std::filesystem::path dir = opt.out.empty() ? std::filesystem::path(".") : std::filesystem::path(opt.out);
        std::filesystem::create_directories(dir);
        bool any = false;
        for (const json& run : doc["runs"]) {
            if (!run.contains("name") || !run["name"].is_string()) throw malformed("every run needs a name");
            const std::string run_name = run["name"].get<std::string>();
            const std::string type = run.value("type", "sweep");
            SweepTable table;
            if (type == "correlate") {
                // K_JJ(tau) traces, one column per series value
                if (!run.contains("base") || !run.contains("series") || !run.contains("tau_grid"))
                    throw malformed(run_name + ": correlate runs need base, series and tau_grid");
                const json& series = run["series"];
                const std::string path = series.at("path").get<std::string>();
                const std::vector<double> taus = tau_grid_from_json(run["tau_grid"]);
                table.header = {"tau"};
                table.axis_columns = 1;
                std::vector<std::vector<std::pair<double, double>>> traces;
                for (const json& v : series.at("values")) {
                    json cfg_doc = run["base"];
                    set_path(cfg_doc, path, v);
                    const SystemConfig cfg = checked_config(cfg_doc);
                    const SteadyState ss(cfg);
                    std::vector<std::pair<double, double>> k(taus.size());
                    parallel_for(taus.size(), opt.jobs, [&](std::size_t n) {
                        k[n] = total_correlation_with_error(ss.block(taus[n]), cfg.coupling_k, cfg.mass);
                    });
                    traces.push_back(std::move(k));
                    table.header.push_back("K_JJ(" + path + "=" + axis_value_text(v) + ")");
                }
                for (const json& v : series.at("values")) table.header.push_back("K_JJ_error(" + path + "=" + axis_value_text(v) + ")");
                table.header.push_back("error");
                for (std::size_t n = 0; n < taus.size(); ++n) {
                    std::vector<std::string> row{format_number(taus[n])};
                    for (const auto& tr : traces) row.push_back(format_number(tr[n].first));
                    for (const auto& tr : traces) row.push_back(format_number(tr[n].second));
                    row.emplace_back();
                    table.rows.push_back(std::move(row));
                }
                table.succeeded = table.rows.size();
            } else if (type == "sweep") {
                EvalContext ctx;
                ctx.seed = opt.seed;
                ctx.criterion_dir = opt.criterion_dir;
                table = run_sweep_table(sweep_from_json(run), ctx, opt.jobs);
            } else {
                throw malformed(run_name + ": unknown run type '" + type + "'");
            }
            Output csv((dir / (run_name + ".csv")).string());
            write_csv(csv.stream(), table.header, table.rows);
            Output dat((dir / (run_name + ".dat")).string());
            write_dat(dat.stream(), table);
            err << "wrote " << (dir / (run_name + ".csv")).string() << " (" << table.succeeded << "/" << table.rows.size()
                << " points)\n";
            any = any || table.succeeded > 0;
        }
        return any ? 0 : 3;
    } catch (...) {
        return exit_code_for(std::current_exception(), err);
    }
}

}  // namespace heatchain::cli
