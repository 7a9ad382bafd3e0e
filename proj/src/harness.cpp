#include "fracgreen/harness.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "fracgreen/errors.hpp"
#include "fracgreen/green.hpp"
#include "fracgreen/quadrature.hpp"

namespace fracgreen {

double Bump::operator()(double x) const {
    const double t = (x - center) / width;
    if (std::abs(t) >= 1.0) return 0.0;
    return std::exp(1.0 - 1.0 / (1.0 - t * t));
}

TestBattery make_battery(std::shared_ptr<const Grid> grid, const FracParams& params,
                         std::uint64_t seed, int n_bumps) {
    if (grid->dim != 1)
        throw AssemblyError("make_battery: one-dimensional grids only");
    TestBattery b;
    b.grid = grid;
    b.params = params;

    std::mt19937_64 rng(seed ^ 0xA5A5A5A5DEADBEEFull);
    std::uniform_real_distribution<double> Uc(-0.6, 0.6), Uw(0.15, 0.35);
    while (static_cast<int>(b.bumps.size()) < n_bumps) {
        Bump bp{Uc(rng), Uw(rng)};
        if (std::abs(bp.center) + bp.width > 0.95) continue; // keep 0.05 off the boundary
        b.bumps.push_back(bp);
    }

    for (const auto& bp : b.bumps) {
        std::vector<double> lap(grid->size());
        const std::array<double, 4> breaks{bp.center - bp.width, bp.center + bp.width,
                                           0.0, 0.0};
        for (int i = 0; i < grid->size(); ++i) {
            const double x = grid->x(i);
            const double cutoff =
                std::max(std::abs(x - breaks[0]), std::abs(x - breaks[1])) + 1e-12;
            lap[i] = singular_pair_integral([&](double y) { return bp(y); }, x,
                                            params.alpha, params.c_norm, cutoff,
                                            breaks, 2, 1e-9);
        }
        double scale = 0.0;
        for (double v : lap) scale += std::abs(v) * grid->h;
        b.bump_laplacians.push_back(std::move(lap));
        b.bump_scale.push_back(scale);
    }

    const double a = params.alpha;
    auto edge = [a](double y) {
        const double v = 1.0 - y * y;
        return v > 0.0 ? std::pow(v, a) : 0.0;
    };
    b.calpha.push_back(edge);
    b.calpha.push_back([edge](double y) { return edge(y) * (1.0 + 0.5 * y); });
    Bump mid{0.2, 0.5};
    b.calpha.push_back([edge, mid](double y) { return edge(y) * (0.5 + mid(y)); });
    return b;
}

double weak_residual(const GridField& u, const ProblemSpec& problem,
                     const TestBattery& battery, const GridField* extra_source) {
    const Grid& grid = *u.grid;
    if (battery.grid.get() != u.grid.get())
        throw AssemblyError("weak_residual: battery built on a different grid");
    auto du = gradient(u);

    double worst = 0.0;
    for (std::size_t k = 0; k < battery.bumps.size(); ++k) {
        const auto& bp = battery.bumps[k];
        const auto& lap = battery.bump_laplacians[k];

        double lhs = 0.0;
        for (int i = 0; i < grid.size(); ++i) lhs += u[i] * lap[i] * grid.h;

        double rhs = 0.0;
        for (int i = 0; i < grid.size(); ++i)
            rhs += problem.g.eval(i, std::abs(du[i])) * bp(grid.x(i)) * grid.h;

        for (const auto& atom : problem.nu.atoms)
            rhs += problem.sigma * atom.mass * bp(atom.point[0]);
        if (problem.nu.density)
            for (int i = 0; i < grid.size(); ++i)
                rhs += problem.sigma * (*problem.nu.density)[i] * bp(grid.x(i)) * grid.h;

        if (extra_source)
            for (int i = 0; i < grid.size(); ++i)
                rhs += (*extra_source)[i] * bp(grid.x(i)) * grid.h;

        if (problem.rho > 0.0 && !problem.mu.atoms.empty()) {
            GridField phi = make_field(u.grid, [&](Point p) { return bp(p[0]); });
            for (const auto& atom : problem.mu.atoms)
                rhs -= problem.rho * atom.mass *
                       nonlocal_normal_derivative(phi, atom.point, problem.params);
        }
        worst = std::max(worst, std::abs(lhs - rhs) / battery.bump_scale[k]);
    }
    return worst;
}

ComparisonReport comparison_experiment(const ProblemSpec& base, double bump_height,
                                       double tol) {
    ComparisonReport rep;
    auto setup = prepare_solver(base);
    Solution lo = solve_full(base, setup);

    if (!(base.sigma > 0.0))
        throw ParameterError("comparison_experiment: the ordered pair enters through "
                             "sigma nu, so sigma must be positive");
    ProblemSpec bigger = base;
    Bump bp{0.1, 0.4};
    GridField extra = make_field(base.grid, [&](Point p) { return bump_height * bp(p[0]); });
    if (!bigger.nu.density) bigger.nu.density = make_field(base.grid, 0.0);
    for (int i = 0; i < extra.size(); ++i) (*bigger.nu.density)[i] += extra[i];
    auto setup2 = prepare_solver(bigger);
    Solution hi = solve_full(bigger, setup2);

    rep.ordered = true;
    for (int i = 0; i < lo.u.size(); ++i) {
        const double gap = lo.u[i] - hi.u[i];
        if (gap > rep.max_violation) {
            rep.max_violation = gap;
            rep.counterexample_node = i;
        }
    }
    rep.ordered = rep.max_violation <= tol;

    // two-initialization probe on the identical problem
    GridField zero = make_field(base.grid, 0.0);
    Solution s1 = picard_solve(base, 64, setup);
    Solution s2 = picard_solve(base, 64, setup, &zero);
    for (int i = 0; i < s1.u.size(); ++i)
        rep.two_start_gap = std::max(rep.two_start_gap, std::abs(s1.u[i] - s2.u[i]));
    return rep;
}

StabilityReport stability_experiment(const ProblemSpec& base,
                                     const std::vector<int>& schedule,
                                     int proxy_level) {
    StabilityReport rep;
    rep.schedule = schedule;
    const double p = std::max(1.0, base.g.p);

    auto solve_level = [&](int level) {
        ProblemSpec pb = base;
        pb.nu.atoms.clear();
        pb.nu.density = mollify_measure(base.nu, level, base.grid);
        for (auto& atom : pb.mu.atoms) {
            const double r = std::hypot(atom.point[0], atom.point[1]);
            const double scale = (r + 1.0 / level) / r; // outward radial shift
            atom.point[0] *= scale;
            atom.point[1] *= scale;
        }
        return solve_full(pb);
    };

    Solution proxy = solve_level(proxy_level);
    for (int level : schedule) {
        Solution s = solve_level(level);
        GridField d = s.u;
        for (int i = 0; i < d.size(); ++i) d[i] -= proxy.u[i];
        rep.distances.push_back(w1q_norm(d, p));
    }
    const auto& ds = rep.distances;
    rep.final_distance = ds.back();
    rep.eventually_decreasing =
        ds.size() >= 3 && ds[ds.size() - 1] < ds[ds.size() - 2] &&
        ds[ds.size() - 2] < ds[ds.size() - 3];
    return rep;
}

namespace {

std::string classify(double ratio) {
    if (ratio >= 0.95 && ratio <= 1.05) return "stable";
    if (ratio >= 1.10) return "growing";
    return "indeterminate";
}

} // namespace

SweepReport critical_sweep(const FracParams& params, const std::vector<int>& refinements,
                           const std::vector<double>& q_factors) {
    if (params.dim != 1)
        throw AssemblyError("critical_sweep: one-dimensional only");
    SweepReport rep;
    rep.refinements = refinements;
    const double ps = params.p_star();

    std::vector<GridField> potentials;
    std::vector<std::shared_ptr<const Grid>> grids;
    for (int n : refinements) {
        auto grid = make_grid(1, n);
        auto G = build_green(grid, params, GreenRoute::Explicit);
        RadonMeasure d;
        d.support = Support::Interior;
        d.atoms.push_back({{0.0, 0.0}, 1.0});
        potentials.push_back(green_apply(G, d));
        grids.push_back(grid);
    }

    for (double qf : q_factors) {
        SweepRow row;
        row.q_factor = qf;
        row.q = std::max(1.0, qf * ps); // W^{1,q} needs q >= 1
        for (std::size_t k = 0; k < potentials.size(); ++k) {
            const GridField& u = potentials[k];
            row.norm.push_back(w1q_norm(u, row.q));
            auto du = gradient(u);
            double s = 0.0;
            for (int i = 0; i < u.size(); ++i)
                s += std::pow(std::abs(du[i]) *
                                  std::pow(grids[k]->dist[i], 1.0 - params.alpha),
                              row.q) *
                     grids[k]->h;
            row.weighted.push_back(std::pow(s, 1.0 / row.q));
        }
        const std::size_t m = row.norm.size();
        row.ratio_norm = row.norm[m - 1] / row.norm[m - 2];
        row.ratio_weighted = row.weighted[m - 1] / row.weighted[m - 2];
        row.verdict_norm = classify(row.ratio_norm);
        row.verdict_weighted = classify(row.ratio_weighted);
        rep.rows.push_back(std::move(row));
    }
    return rep;
}

} // namespace fracgreen
