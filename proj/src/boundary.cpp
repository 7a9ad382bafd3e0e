#include "fracgreen/boundary.hpp"

#include <cmath>
#include <sstream>

#include "fracgreen/errors.hpp"
#include "fracgreen/norms.hpp"

namespace fracgreen {

LiftedMeasure lift_measure(const RadonMeasure& eta, double t, const Grid& grid,
                           const FracParams& params) {
    if (eta.support != Support::Boundary)
        throw ValidationError("lift_measure: measure must live on the boundary");
    if (!(t > 0.0) || t >= kMaxLiftLevel) {
        std::ostringstream os;
        os << "lift_measure: level t = " << t << " outside (0, " << kMaxLiftLevel << ")";
        throw ParameterError(os.str());
    }
    LiftedMeasure out;
    out.t = t;
    out.scale = std::pow(t, -params.alpha);
    out.measure.support = Support::Interior;
    for (const auto& atom : eta.atoms) {
        MeasureAtom moved = atom;
        moved.point[0] *= (1.0 - t);
        moved.point[1] *= (1.0 - t);
        out.measure.atoms.push_back(moved);
    }
    (void)grid;
    return out;
}

NormalLimit fractional_normal_test(const std::function<double(double)>& xi,
                                   double x_boundary, const FracParams& params) {
    if (std::abs(std::abs(x_boundary) - 1.0) > 1e-14)
        throw ParameterError("fractional_normal_test: point must satisfy |x| = 1");
    const double inward = -x_boundary; // unit inward normal in dim 1
    std::vector<double> f;
    for (int j = 0; j <= 8; ++j) {
        const double t = kMaxLiftLevel * std::pow(2.0, -j);
        f.push_back(std::pow(t, -params.alpha) * xi(x_boundary + t * inward));
    }
    std::vector<double> d;
    for (std::size_t j = 0; j + 1 < f.size(); ++j) d.push_back(f[j + 1] - f[j]);

    NormalLimit out;
    // all-zero tail: the limit is plainly zero
    bool all_zero = true;
    for (double v : f) all_zero = all_zero && v == 0.0;
    if (all_zero) {
        out.converged = true;
        return out;
    }

    // Cauchy check on the last few differences
    bool cauchy = true;
    for (std::size_t j = d.size() - 3; j + 1 < d.size(); ++j)
        cauchy = cauchy && std::abs(d[j + 1]) <= 0.95 * std::abs(d[j]) + 1e-15;
    if (!cauchy) {
        out.value = f.back();
        out.converged = false;
        return out;
    }

    // order from the last ratio pair, then one Richardson sweep
    const double r = std::abs(d[d.size() - 2]) > 0.0
                         ? std::abs(d[d.size() - 1]) / std::abs(d[d.size() - 2])
                         : 0.5;
    out.order = -std::log2(std::max(r, 1e-12));
    const double factor = std::pow(2.0, out.order) - 1.0;
    out.value = factor > 1e-12 ? f.back() + d.back() / factor : f.back();
    out.converged = true;
    return out;
}

GridField lifted_density(const LiftedMeasure& lifted,
                         std::shared_ptr<const Grid> grid) {
    const double r = 0.5 * lifted.t;
    if (r < 2.0 * grid->h)
        throw AssemblyError(
            "lifted_density: schedule level finer than the grid can represent");
    GridField out = make_field(grid, 0.0);
    for (const auto& atom : lifted.measure.atoms) {
        double total = 0.0;
        std::vector<double> w(grid->size(), 0.0);
        for (int i = 0; i < grid->size(); ++i) {
            const double tq = (grid->x(i) - atom.point[0]) / r;
            if (std::abs(tq) >= 1.0) continue;
            const double v = 1.0 - tq * tq;
            w[i] = 0.9375 * v * v / r;
            total += w[i] * grid->h;
        }
        if (total <= 0.0)
            throw AssemblyError("lifted_density: mollifier missed every node");
        for (int i = 0; i < grid->size(); ++i) out[i] += atom.mass * w[i] / total;
    }
    return out;
}

BoundaryReport solve_concentrated(const RadonMeasure& eta, const ProblemSpec& base,
                                  const std::vector<double>& schedule) {
    if (schedule.empty())
        throw ParameterError("solve_concentrated: empty schedule");
    for (std::size_t k = 0; k + 1 < schedule.size(); ++k)
        if (schedule[k + 1] >= schedule[k])
            throw ParameterError("solve_concentrated: schedule must decrease");

    const double q_mid = 0.5 * (1.0 + base.params.p_star());
    BoundaryReport report;
    int grew = 0;
    for (double t : schedule) {
        auto lifted = lift_measure(eta, t, *base.grid, base.params);
        GridField density = lifted_density(lifted, base.grid);
        for (auto& v : density.values) v *= lifted.scale;
        auto setup = prepare_solver(base, &density);
        Solution sol = solve_full(base, setup);

        BoundaryLevelReport lv;
        lv.t = t;
        lv.l1 = l1_norm(sol.u);
        lv.w11 = w1q_norm(sol.u, 1.0);
        lv.w1q = w1q_norm(sol.u, q_mid);
        if (!report.solutions.empty()) {
            GridField diff = sol.u;
            const GridField& prev = report.solutions.back().u;
            for (int i = 0; i < diff.size(); ++i) diff[i] -= prev[i];
            lv.cauchy = l1_norm(diff);
            const double last = report.levels.back().cauchy;
            if (report.levels.size() > 1 && lv.cauchy > last) {
                if (++grew >= 2)
                    throw DivergingSequenceError(
                        "solve_concentrated: Cauchy differences grew twice in a row");
            } else {
                grew = 0;
            }
        }
        report.levels.push_back(lv);
        report.solutions.push_back(std::move(sol));
    }
    return report;
}

} // namespace fracgreen
