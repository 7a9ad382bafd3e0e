#include "fracgreen/solver.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <random>
#include <sstream>

#include "fracgreen/errors.hpp"
#include "fracgreen/norms.hpp"

namespace fracgreen {

Regime regime_of(double p) { return p > 1.0 ? Regime::Superlinear : Regime::Sublinear; }

double estimate_c0(const GreenTable& green, double p, std::uint64_t seed,
                   int extra_probes) {
    const auto& grid = *green.grid;
    if (grid.dim != 1)
        throw AssemblyError("estimate_c0: probe set is one-dimensional");
    const double q = std::max(p, 1.0);

    std::vector<double> dirac_sites{0.0, 0.3, -0.3, 0.6, -0.6, 0.85, -0.85};
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
    std::uniform_real_distribution<double> U(-0.9, 0.9);
    for (int k = 0; k < extra_probes; ++k) dirac_sites.push_back(U(rng));

    double best = 0.0;
    for (double site : dirac_sites) {
        RadonMeasure m;
        m.support = Support::Interior;
        m.atoms.push_back({{site, 0.0}, 1.0});
        GridField u = green_apply(green, m);
        best = std::max(best, grad_lq_norm(u, q));
    }
    // normalized densities: flat, centered bump, off-center bump
    auto density_probe = [&](const std::function<double(double)>& f) {
        GridField d = make_field(green.grid, [&](Point pt) { return f(pt[0]); });
        const double mass = l1_norm(d);
        if (mass <= 0.0) return;
        for (auto& v : d.values) v /= mass;
        GridField u = green_apply(green, d);
        best = std::max(best, grad_lq_norm(u, q));
    };
    density_probe([](double) { return 1.0; });
    density_probe([](double x) { return std::max(0.0, 1.0 - 16.0 * x * x); });
    density_probe([](double x) { return std::max(0.0, 1.0 - 64.0 * (x - 0.7) * (x - 0.7)); });
    return best;
}

double evaluate_F(double lambda, const SmallnessCoeffs& k, Regime regime) {
    if (!(lambda > 0.0)) throw ParameterError("evaluate_F: lambda must be positive");
    if (regime == Regime::Superlinear) {
        const double pump = k.c * std::pow(2.0, k.p - 1.0);
        return k.c0 * (pump * std::pow(lambda, k.p - 1.0) +
                       (pump * k.grad_p_poisson + k.eps_f_l1 + k.sigma_C0) / lambda) -
               1.0;
    }
    // sublinear, written so c = 0 stays finite:
    // c0 c (1 + (grad + eps/c + vol)/lambda) + c0 sigma C0 / lambda - 1
    return k.c0 * (k.c + (k.c * (k.grad_p_poisson + k.domain_vol) + k.eps_f_l1) / lambda) +
           k.c0 * k.sigma_C0 / lambda - 1.0;
}

namespace {

double min_over_lambda(const SmallnessCoeffs& k, Regime regime) {
    double best = 1e300;
    for (double l = 1e-8; l <= 1e8; l *= 1.2)
        best = std::min(best, evaluate_F(l, k, regime));
    return best;
}

double largest_admissible_c(SmallnessCoeffs k, Regime regime) {
    double lo = 0.0, hi = std::max(k.c, 1e-6);
    // grow hi only if even it is admissible (should not happen when called
    // on a NoRoot outcome, but keep the bracket honest)
    auto admissible = [&](double c) {
        k.c = c;
        return min_over_lambda(k, regime) < 0.0;
    };
    if (admissible(hi)) return hi;
    for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        (admissible(mid) ? lo : hi) = mid;
    }
    return lo;
}

} // namespace

double lambda_star(const SmallnessCoeffs& k, Regime regime) {
    const double constant_mass =
        regime == Regime::Superlinear
            ? k.c * std::pow(2.0, k.p - 1.0) * k.grad_p_poisson + k.eps_f_l1 + k.sigma_C0
            : k.c * (k.grad_p_poisson + k.domain_vol) + k.eps_f_l1 + k.sigma_C0;
    if (constant_mass <= 0.0) {
        // Trivial data: the map fixes 0; any ball works.
        if (k.c <= 0.0) return 0.0;
        if (regime == Regime::Sublinear) {
            if (k.c0 * k.c >= 1.0)
                throw NoRootError("lambda_star: no root, c must satisfy c < 1/c0",
                                  largest_admissible_c(k, regime));
            return 0.0;
        }
        // F crosses zero from below at the pure-power root.
        return std::pow(1.0 / (k.c0 * k.c * std::pow(2.0, k.p - 1.0)),
                        1.0 / (k.p - 1.0));
    }

    // F > 0 near 0. Scan for a sign change.
    double lo = 1e-8;
    if (evaluate_F(lo, k, regime) <= 0.0) lo = 1e-12;
    double hi = 0.0;
    for (double l = lo * 2.0; l <= 1e9; l *= 2.0) {
        if (evaluate_F(l, k, regime) < 0.0) {
            hi = l;
            break;
        }
    }
    if (hi == 0.0) {
        std::ostringstream os;
        const double cmax = largest_admissible_c(k, regime);
        os << "lambda_star: smallness condition fails (no root); largest admissible "
              "growth coefficient c ~= "
           << cmax;
        throw NoRootError(os.str(), cmax);
    }
    for (int it = 0; it < 200 && (hi - lo) > 1e-10 * lo; ++it) {
        const double mid = 0.5 * (lo + hi);
        (evaluate_F(mid, k, regime) > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

namespace {

// C^1 quartic kernel (15/16)(1 - t^2)^2 on [-1, 1].
double quartic_kernel(double t) {
    if (std::abs(t) >= 1.0) return 0.0;
    const double v = 1.0 - t * t;
    return 0.9375 * v * v;
}

} // namespace

GridField mollify_measure(const RadonMeasure& nu, int level,
                          std::shared_ptr<const Grid> grid, double r0) {
    if (nu.support != Support::Interior)
        throw ValidationError("mollify_measure: measure must be interior");
    if (level < 1) throw ParameterError("mollify_measure: level must be >= 1");
    if (grid->dim != 1)
        throw AssemblyError("mollify_measure: one-dimensional grids only");
    const double h = grid->h;
    // Radii below the grid scale are not representable; saturate there so
    // deeper levels coincide instead of degrading into nearest-node noise.
    const double r = std::max(r0 / level, 2.0 * h);
    GridField out = make_field(grid, 0.0);

    auto spread = [&](double center, double mass) {
        std::vector<double> w(grid->size(), 0.0);
        double total = 0.0;
        for (int i = 0; i < grid->size(); ++i) {
            w[i] = quartic_kernel((grid->x(i) - center) / r) / r;
            total += w[i] * h;
        }
        if (total <= 0.0) {
            // mollifier support fell between nodes; keep the mass at the
            // nearest node instead of dropping it
            int best = 0;
            for (int i = 1; i < grid->size(); ++i)
                if (std::abs(grid->x(i) - center) < std::abs(grid->x(best) - center))
                    best = i;
            out[best] += mass / h;
            return;
        }
        if (1.0 - center < r || 1.0 + center < r)
            std::cerr << "mollify_measure: support clipped at the boundary for an atom "
                         "at x = "
                      << center << "; mass renormalized\n";
        for (int i = 0; i < grid->size(); ++i) out[i] += mass * w[i] / total;
    };

    for (const auto& atom : nu.atoms) spread(atom.point[0], atom.mass);
    if (nu.density) {
        const GridField& d = *nu.density;
        for (int j = 0; j < grid->size(); ++j)
            if (d[j] != 0.0) spread(grid->x(j), d[j] * h);
    }
    return out;
}

double truncated_growth(const GrowthSpec& g, int level, int node, double s) {
    return std::min(g.eval(node, s), double(level));
}

SolverSetup prepare_solver(const ProblemSpec& problem, const GridField* eta_source,
                           std::uint64_t seed) {
    if (problem.grid->dim != 1)
        throw AssemblyError("solver: one-dimensional problems only in this build");
    SolverSetup s;
    s.grid = problem.grid;
    s.green = build_green(problem.grid, problem.params, GreenRoute::Explicit);
    s.regime = regime_of(problem.g.p);

    if (problem.rho > 0.0 && !problem.mu.atoms.empty()) {
        auto pr = poisson_apply(problem.mu, s.green, problem.params);
        s.route_discrepancy = pr.route_discrepancy;
        s.p_part = pr.field;
        for (auto& v : s.p_part.values) v *= problem.rho;
    } else {
        s.p_part = make_field(problem.grid, 0.0);
    }
    s.frozen_part = s.p_part;

    s.eta_source = make_field(problem.grid, 0.0);
    if (eta_source) {
        s.eta_source = *eta_source;
        GridField w = green_apply(s.green, s.eta_source);
        s.eta_part = w;
        for (int i = 0; i < s.frozen_part.size(); ++i) s.frozen_part[i] += w[i];
    }

    const double bound_exponent = s.regime == Regime::Superlinear ? problem.g.p : 1.0;
    s.coeffs.c0 = estimate_c0(s.green, bound_exponent, seed);
    s.coeffs.c = problem.g.c;
    s.coeffs.p = problem.g.p;
    s.coeffs.eps_f_l1 =
        problem.g.f.values.empty() ? 0.0 : problem.g.eps * l1_norm(problem.g.f);
    // Fixed L^1 sources: sigma (||nu|| + 1), plus the lifted boundary density
    // when one is attached.
    s.coeffs.sigma_C0 =
        problem.sigma * (problem.nu.total_mass() + 1.0) + l1_norm(s.eta_source);
    if (s.regime == Regime::Superlinear) {
        const double gp = grad_lq_norm(s.frozen_part, problem.g.p);
        s.coeffs.grad_p_poisson = std::pow(gp, problem.g.p);
    } else {
        s.coeffs.grad_p_poisson = grad_lq_norm(s.frozen_part, 1.0);
    }
    s.coeffs.domain_vol = 2.0;
    s.lambda = lambda_star(s.coeffs, s.regime);
    return s;
}

Solution picard_solve(const ProblemSpec& problem, int level, const SolverSetup& setup,
                      const GridField* start) {
    const auto& grid = *problem.grid;
    const double ball_exponent =
        setup.regime == Regime::Superlinear ? problem.g.p : 1.0;
    const double slack = 1.05;

    GridField nu_n = mollify_measure(problem.nu, level, problem.grid);

    GridField base_source = make_field(problem.grid, 0.0);
    for (int i = 0; i < grid.size(); ++i)
        base_source[i] = problem.sigma * nu_n[i] + setup.eta_source[i];

    Solution sol;
    sol.lambda_star = setup.lambda;
    sol.c0 = setup.coeffs.c0;
    sol.route_discrepancy = setup.route_discrepancy;

    GridField v = start ? *start : green_apply(setup.green, base_source);
    {
        const double g0 = grad_lq_norm(v, ball_exponent);
        sol.grad_lp_history.push_back(g0);
        if (setup.lambda > 0.0 && g0 > slack * setup.lambda)
            throw BallEscapeError(
                "picard_solve: initial iterate already violates the gradient ball");
    }

    double theta = problem.solver.theta;
    double prev_res = -1.0;
    bool converged = false;
    GridField source = make_field(problem.grid, 0.0);
    for (int it = 1; it <= problem.solver.max_iter; ++it) {
        GridField total = v;
        for (int i = 0; i < grid.size(); ++i) total[i] += setup.frozen_part[i];
        auto dv = gradient(total);
        for (int i = 0; i < grid.size(); ++i)
            source[i] =
                truncated_growth(problem.g, level, i, std::abs(dv[i])) + base_source[i];
        GridField w = green_apply(setup.green, source);
        GridField next = v;
        double res = 0.0, scale = 0.0;
        for (int i = 0; i < grid.size(); ++i) {
            next[i] = (1.0 - theta) * v[i] + theta * w[i];
            res += std::abs(next[i] - v[i]) * grid.h;
            scale += std::abs(next[i]) * grid.h;
        }
        sol.residual_history.push_back(res);
        sol.iterations = it;

        const double g = grad_lq_norm(next, ball_exponent);
        sol.grad_lp_history.push_back(g);
        if (setup.lambda > 0.0 && g > slack * setup.lambda) {
            std::ostringstream os;
            os << "picard_solve: iterate " << it << " left the gradient ball ("
               << g << " > " << slack << " * " << setup.lambda
               << "); lambda_star estimate too small or c too large";
            throw BallEscapeError(os.str());
        }

        v = next;
        if (res <= problem.solver.tol * std::max(scale, 1e-300)) {
            converged = true;
            break;
        }
        if (prev_res >= 0.0 && res > prev_res && theta > 1.0 / 16.0)
            theta *= 0.5; // damping rescue on residual growth
        prev_res = res;
    }
    if (!converged)
        throw NonConvergenceError("picard_solve: no convergence within max_iter");

    sol.g_part = v;
    sol.p_part = setup.p_part;
    sol.eta_part = setup.eta_part;
    sol.u = v;
    for (int i = 0; i < grid.size(); ++i) sol.u[i] += setup.frozen_part[i];
    return sol;
}

Solution picard_solve(const ProblemSpec& problem, int level) {
    return picard_solve(problem, level, prepare_solver(problem));
}

Solution solve_full(const ProblemSpec& problem, const SolverSetup& setup) {
    const std::vector<int> schedule{16, 32, 64};
    Solution prev, cur;
    std::vector<double> diffs;
    std::vector<int> iters;
    for (std::size_t k = 0; k < schedule.size(); ++k) {
        cur = picard_solve(problem, schedule[k], setup);
        cur.levels.assign(schedule.begin(), schedule.begin() + k + 1);
        iters.push_back(cur.iterations);
        if (k > 0) {
            GridField d = cur.u;
            for (int i = 0; i < d.size(); ++i) d[i] -= prev.u[i];
            diffs.push_back(w1q_norm(d, std::max(1.0, problem.g.p)));
        }
        prev = cur;
    }
    cur.level_iterations = iters;
    cur.level_diffs = diffs;
    return cur;
}

Solution solve_full(const ProblemSpec& problem) {
    return solve_full(problem, prepare_solver(problem));
}

} // namespace fracgreen
