// nelder_mead.cpp: standard reflection/expansion/contraction/shrink steps

#include "heatchain/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace heatchain {

SimplexResult maximize_simplex(const std::function<double(const Eigen::VectorXd&)>& f,
                               const Eigen::VectorXd& start, const SimplexOptions& opt) {
    const Eigen::Index n = start.size();
    std::vector<Eigen::VectorXd> pts;
    std::vector<double> vals;
    int evals = 0;
    // Minimize -f; non-finite values rank last.
    auto cost = [&](const Eigen::VectorXd& x) {
        ++evals;
        const double v = f(x);
        return std::isfinite(v) ? -v : std::numeric_limits<double>::infinity();
    };

    pts.push_back(start);
    vals.push_back(cost(start));
    for (Eigen::Index k = 0; k < n; ++k) {
        Eigen::VectorXd p = start;
        p(k) += opt.initial_step;
        pts.push_back(p);
        vals.push_back(cost(p));
    }

    std::vector<int> order(n + 1);
    SimplexResult res;
    while (true) {
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return vals[a] < vals[b]; });
        const int best = order.front(), worst = order.back(), second = order[n - 1];

        double size = 0.0;
        for (int k : order) size = std::max(size, (pts[k] - pts[best]).cwiseAbs().maxCoeff());
        const double spread = vals[worst] - vals[best];
        const double ref = std::max(std::abs(vals[best]), opt.f_floor);
        if ((std::isfinite(spread) && spread <= opt.f_tol * ref) || size <= opt.x_tol) {
            res.converged = true;
            break;
        }
        if (evals >= opt.max_evaluations) break;

        Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
        for (int k : order)
            if (k != worst) centroid += pts[k];
        centroid /= static_cast<double>(n);

        const Eigen::VectorXd xr = centroid + (centroid - pts[worst]);
        const double fr = cost(xr);
        if (fr < vals[best]) {
            const Eigen::VectorXd xe = centroid + 2.0 * (centroid - pts[worst]);
            const double fe = cost(xe);
            if (fe < fr) {
                pts[worst] = xe;
                vals[worst] = fe;
            } else {
                pts[worst] = xr;
                vals[worst] = fr;
            }
            continue;
        }
        if (fr < vals[second]) {
            pts[worst] = xr;
            vals[worst] = fr;
            continue;
        }
        const bool outside = fr < vals[worst];
        const Eigen::VectorXd xc = outside ? Eigen::VectorXd(centroid + 0.5 * (xr - centroid))
                                           : Eigen::VectorXd(centroid + 0.5 * (pts[worst] - centroid));
        const double fc = cost(xc);
        if (fc < (outside ? fr : vals[worst])) {
            pts[worst] = xc;
            vals[worst] = fc;
            continue;
        }
        for (int k : order) {
            if (k == best) continue;
            pts[k] = pts[best] + 0.5 * (pts[k] - pts[best]);
            vals[k] = cost(pts[k]);
        }
    }

    const auto it = std::min_element(vals.begin(), vals.end());
    const auto idx = static_cast<std::size_t>(it - vals.begin());
    res.x = pts[idx];
    res.value = -vals[idx];
    res.evaluations = evals;
    return res;
}

}  // namespace heatchain
