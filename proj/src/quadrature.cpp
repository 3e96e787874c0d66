// quadrature.cpp: GK21 panels refined by global bisection

#include "heatchain/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>

#include "heatchain/errors.hpp"
#include "heatchain/spectral.hpp"

namespace heatchain {

namespace {

// 21-point Kronrod abscissae and weights with the embedded 10-point Gauss weights.
constexpr std::array<double, 11> xgk{
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.0};
constexpr std::array<double, 11> wgk{
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077958109831074, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
constexpr std::array<double, 5> wg{
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

constexpr double epmach = std::numeric_limits<double>::epsilon();
constexpr double uflow = std::numeric_limits<double>::min();

struct Panel {
    double a;
    double b;
    Eigen::VectorXd value;
    Eigen::VectorXd error;
    double key;
};

struct PanelOrder {
    bool operator()(const Panel* x, const Panel* y) const {
        if (x->key != y->key) return x->key < y->key;
        return x->a > y->a;
    }
};

class KronrodRule {
public:
    KronrodRule(const VectorIntegrand& f, int dim) : f_(f), dim_(dim), nodes_(dim, 21), buf_(dim) {}

    Panel apply(double a, double b) {
        const double center = 0.5 * (a + b);
        const double half = 0.5 * (b - a);
        eval(0, center);
        for (int j = 0; j < 10; ++j) {
            const double dx = half * xgk[j];
            eval(1 + 2 * j, center - dx);
            eval(2 + 2 * j, center + dx);
        }
        ++calls_;

        Panel p{a, b, Eigen::VectorXd(dim_), Eigen::VectorXd(dim_), 0.0};
        for (int k = 0; k < dim_; ++k) {
            const double fc = nodes_(k, 0);
            double resk = wgk[10] * fc;
            double resg = 0.0;
            double resabs = std::abs(resk);
            for (int j = 0; j < 10; ++j) {
                const double f1 = nodes_(k, 1 + 2 * j);
                const double f2 = nodes_(k, 2 + 2 * j);
                resk += wgk[j] * (f1 + f2);
                resabs += wgk[j] * (std::abs(f1) + std::abs(f2));
                if (j % 2 == 1) resg += wg[j / 2] * (f1 + f2);
            }
            const double reskh = 0.5 * resk;
            double resasc = wgk[10] * std::abs(fc - reskh);
            for (int j = 0; j < 10; ++j) {
                resasc += wgk[j] * (std::abs(nodes_(k, 1 + 2 * j) - reskh) +
                                    std::abs(nodes_(k, 2 + 2 * j) - reskh));
            }
            const double h = std::abs(half);
            resabs *= h;
            resasc *= h;
            double err = std::abs((resk - resg) * half);
            if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
            if (resabs > uflow / (50.0 * epmach)) err = std::max(50.0 * epmach * resabs, err);
            p.value(k) = resk * half;
            p.error(k) = err;
        }
        p.key = p.error.maxCoeff();
        return p;
    }

    std::size_t evaluations() const { return 21 * calls_; }

private:
    void eval(int col, double x) {
        buf_.setZero();
        f_(x, buf_);
        if (!buf_.allFinite()) {
            std::ostringstream msg;
            msg.precision(17);
            msg << "integrand is not finite at w = " << x;
            throw NonFiniteIntegrand(msg.str());
        }
        nodes_.col(col) = buf_;
    }

    const VectorIntegrand& f_;
    int dim_;
    Eigen::MatrixXd nodes_;
    Eigen::VectorXd buf_;
    std::size_t calls_ = 0;
};

bool too_narrow(double a, double b) {
    const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
    return (b - a) <= 1e-14 * scale;
}

VectorIntegrand lift(const ScalarIntegrand& f) {
    return [&f](double x, Eigen::Ref<Eigen::VectorXd> out) { out(0) = f(x); };
}

QuadratureResult to_scalar(const VectorQuadratureResult& r) {
    return {r.value(0), r.error(0), r.panels, r.evaluations};
}

}  // namespace

VectorQuadratureResult integrate_panels(const VectorIntegrand& f, int dim,
                                        const std::vector<double>& breakpoints,
                                        const QuadratureSpec& spec) {
    if (!(spec.rel_tol > 0.0) || !(spec.abs_tol > 0.0))
        throw std::invalid_argument("quadrature tolerances must be positive");
    if (breakpoints.size() < 2) throw std::invalid_argument("need at least two breakpoints");
    if (dim < 1) throw std::invalid_argument("integrand dimension must be positive");

    KronrodRule rule(f, dim);
    std::vector<std::unique_ptr<Panel>> store;
    std::priority_queue<Panel*, std::vector<Panel*>, PanelOrder> active;
    std::vector<Panel*> frozen;

    Eigen::VectorXd total = Eigen::VectorXd::Zero(dim);
    Eigen::VectorXd total_err = Eigen::VectorXd::Zero(dim);
    auto add = [&](Panel p) {
        total += p.value;
        total_err += p.error;
        store.push_back(std::make_unique<Panel>(std::move(p)));
        Panel* raw = store.back().get();
        if (too_narrow(raw->a, raw->b))
            frozen.push_back(raw);
        else
            active.push(raw);
    };

    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        if (!(breakpoints[i + 1] > breakpoints[i])) throw std::invalid_argument("breakpoints must increase");
        add(rule.apply(breakpoints[i], breakpoints[i + 1]));
    }

    std::size_t panels = breakpoints.size() - 1;
    auto tolerance = [&] { return std::max(spec.rel_tol * total.cwiseAbs().maxCoeff(), spec.abs_tol); };

    while (total_err.maxCoeff() > tolerance()) {
        if (active.empty() || panels >= spec.max_subdivisions) {
            std::ostringstream msg;
            msg.precision(6);
            msg << "quadrature tolerance not met after " << panels << " panels (error "
                << total_err.maxCoeff() << ", target " << tolerance() << ")";
            throw ToleranceNotMet(msg.str(), total.cwiseAbs().maxCoeff(), total_err.maxCoeff());
        }
        Panel* worst = active.top();
        active.pop();
        total -= worst->value;
        total_err -= worst->error;
        const double mid = 0.5 * (worst->a + worst->b);
        const double a = worst->a;
        const double b = worst->b;
        worst->value.setZero();
        worst->error.setZero();
        worst->key = -1.0;
        add(rule.apply(a, mid));
        add(rule.apply(mid, b));
        ++panels;
    }

    // Deterministic summation: left-to-right over the final partition.
    std::vector<Panel*> leaves;
    leaves.reserve(store.size());
    for (auto& p : store)
        if (p->key >= 0.0) leaves.push_back(p.get());
    std::sort(leaves.begin(), leaves.end(), [](const Panel* x, const Panel* y) { return x->a < y->a; });

    VectorQuadratureResult out;
    out.value = Eigen::VectorXd::Zero(dim);
    out.error = Eigen::VectorXd::Zero(dim);
    for (const Panel* p : leaves) {
        out.value += p->value;
        out.error += p->error;
    }
    out.panels = leaves.size();
    out.evaluations = rule.evaluations();
    return out;
}

QuadratureResult integrate_panels(const ScalarIntegrand& f, const std::vector<double>& breakpoints,
                                  const QuadratureSpec& spec) {
    return to_scalar(integrate_panels(lift(f), 1, breakpoints, spec));
}

QuadratureResult integrate_interval(const ScalarIntegrand& f, double a, double b,
                                    const QuadratureSpec& spec) {
    if (a == b) return {};
    if (a > b) {
        QuadratureResult r = integrate_interval(f, b, a, spec);
        r.value = -r.value;
        return r;
    }
    return integrate_panels(f, {a, b}, spec);
}

QuadratureResult integrate_to_infinity(const ScalarIntegrand& f, double a, double scale,
                                       const QuadratureSpec& spec) {
    if (!(scale > 0.0)) throw std::invalid_argument("tail scale must be positive");
    ScalarIntegrand mapped = [&](double t) {
        const double u = 1.0 - t;
        const double s = a + scale * t / u;
        const double jac = scale / (u * u);
        if (!std::isfinite(s)) return 0.0;
        const double v = f(s);
        return v == 0.0 ? 0.0 : v * jac;
    };
    return integrate_panels(mapped, {0.0, 0.5, 0.9, 1.0}, spec);
}

double resolve_omega_max(const PeakSet& peaks, const QuadratureSpec& spec) {
    if (spec.omega_max > 0.0) return spec.omega_max;
    double top = 0.0;
    for (double c : peaks.centers) top = std::max(top, std::abs(c));
    return spec.tail_scale * std::log(1.0 / spec.rel_tol) + top;
}

std::vector<double> line_breakpoints(const PeakSet& peaks, const QuadratureSpec& spec) {
    const double wmax = resolve_omega_max(peaks, spec);
    std::vector<double> pts{0.0, wmax};
    for (std::size_t n = 0; n < peaks.centers.size(); ++n) {
        const double c = peaks.centers[n];
        const double w = n < peaks.widths.size() ? peaks.widths[n] : 0.0;
        pts.push_back(std::abs(c));
        for (double mult : spec.bracket_multipliers) {
            pts.push_back(std::abs(c - mult * w));
            pts.push_back(std::abs(c + mult * w));
        }
    }
    std::sort(pts.begin(), pts.end());
    std::vector<double> out;
    for (double p : pts) {
        if (p < 0.0 || p > wmax) continue;
        if (!out.empty() && p - out.back() <= 1e-13 * std::max(1.0, p)) continue;
        out.push_back(p);
    }
    if (out.back() != wmax) out.back() = wmax;
    return out;
}

VectorQuadratureResult integrate_line(const VectorIntegrand& f, int dim, const PeakSet& peaks,
                                      const QuadratureSpec& spec) {
    Eigen::VectorXd mirror(dim);
    VectorIntegrand folded = [&](double w, Eigen::Ref<Eigen::VectorXd> out) {
        f(w, out);
        mirror.setZero();
        f(-w, mirror);
        out += mirror;
    };
    return integrate_panels(folded, dim, line_breakpoints(peaks, spec), spec);
}

QuadratureResult integrate_line(const ScalarIntegrand& f, const PeakSet& peaks,
                                const QuadratureSpec& spec) {
    return to_scalar(integrate_line(lift(f), 1, peaks, spec));
}

PeakSet estimate_widths(const SystemConfig& cfg) {
    const NormalModes modes = normal_modes(cfg);
    PeakSet peaks;
    for (int n = 0; n < 3; ++n) {
        const double w = modes.frequencies[n];
        double width = 0.0;
        for (int i = 0; i < 3; ++i) {
            const double v = modes.vectors(i, n);
            width += v * v * chi_imag(Susceptibility::of(cfg.baths[i], cfg.mass), w) / (cfg.mass * w);
        }
        peaks.centers.push_back(w);
        peaks.widths.push_back(width);
    }
    return peaks;
}

}  // namespace heatchain
