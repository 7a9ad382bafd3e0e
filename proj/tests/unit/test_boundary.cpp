#include "doctest.h"

#include <cmath>

#include "fracgreen/boundary.hpp"
#include "fracgreen/errors.hpp"
#include "fracgreen/harness.hpp"
#include "fracgreen/model.hpp"
#include "fracgreen/norms.hpp"

using namespace fracgreen;

namespace {

RadonMeasure boundary_dirac(double x = 1.0, double mass = 1.0) {
    RadonMeasure eta;
    eta.support = Support::Boundary;
    eta.atoms.push_back({{x, 0.0}, mass});
    return eta;
}

ProblemSpec eta_base(int n, double alpha, double c) {
    ProblemSpec s;
    s.params = make_params(1, alpha);
    s.grid = make_grid(1, n);
    s.g.c = c;
    s.g.p = 1.5;
    s.g.eps = 0.0;
    s.g.f = make_field(s.grid, 0.0);
    s.sigma = 0.0;
    s.rho = 0.0;
    s.nu.support = Support::Interior;
    s.mu.support = Support::Exterior;
    s.solver.tol = 1e-9;
    s.solver.max_iter = 100;
    return validate_problem(std::move(s));
}

} // namespace

TEST_CASE("lift_measure: radial projection, mass, scale") {
    auto grid = make_grid(1, 64);
    auto params = make_params(1, 0.75);
    auto eta = boundary_dirac(1.0, 1.0);

    auto lifted = lift_measure(eta, 0.1, *grid, params);
    REQUIRE(lifted.measure.atoms.size() == 1);
    CHECK(lifted.measure.atoms[0].point[0] == doctest::Approx(0.9).epsilon(1e-15));
    CHECK(lifted.measure.atoms[0].mass == 1.0);
    CHECK(lifted.scale == doctest::Approx(std::pow(0.1, -0.75)).epsilon(1e-14));
    CHECK(lifted.measure.support == Support::Interior);

    // total scaled mass
    CHECK(lifted.scale * lifted.measure.atoms[0].mass ==
          doctest::Approx(std::pow(0.1, -0.75)));

    CHECK_THROWS_AS(lift_measure(eta, 0.3, *grid, params), ParameterError);
    CHECK_THROWS_AS(lift_measure(eta, 0.0, *grid, params), ParameterError);
    RadonMeasure interior;
    interior.support = Support::Interior;
    CHECK_THROWS_AS(lift_measure(interior, 0.1, *grid, params), ValidationError);
}

TEST_CASE("lifted density: mass-exact, supported near the level set") {
    auto grid = make_grid(1, 512);
    auto params = make_params(1, 0.75);
    auto eta = boundary_dirac(1.0, 2.5);
    for (double t : {0.2, 0.1, 0.05}) {
        auto lifted = lift_measure(eta, t, *grid, params);
        GridField d = lifted_density(lifted, grid);
        CHECK(l1_norm(d) == doctest::Approx(2.5).epsilon(1e-12));
        for (int i = 0; i < grid->size(); ++i)
            if (d[i] != 0.0) CHECK(grid->dist[i] < 2.0 * t);
    }
    // schedule below the grid resolution is refused
    auto fine = lift_measure(eta, 0.01, *grid, params);
    CHECK_THROWS_AS(lifted_density(fine, grid), AssemblyError);
}

TEST_CASE("fractional normal limit: torsion closed form and homogeneity") {
    auto params = make_params(1, 0.75);
    auto torsion = [&](double y) {
        const double v = 1.0 - y * y;
        return v > 0.0 ? std::pow(v, params.alpha) : 0.0;
    };
    auto lim = fractional_normal_test(torsion, 1.0, params);
    CHECK(lim.converged);
    CHECK(lim.value == doctest::Approx(std::pow(2.0, params.alpha)).epsilon(1e-3));
    CHECK(lim.order == doctest::Approx(1.0).epsilon(0.2));

    auto scaled = fractional_normal_test([&](double y) { return 0.7 * torsion(y); },
                                         -1.0, params);
    CHECK(scaled.converged);
    CHECK(scaled.value == doctest::Approx(0.7 * lim.value).epsilon(1e-6));

    auto inner = fractional_normal_test(
        [](double y) { return std::abs(y) < 0.5 ? 1.0 - 2.0 * std::abs(y) : 0.0; }, 1.0,
        params);
    CHECK(inner.converged);
    CHECK(inner.value == 0.0);

    // wrong boundary rate: t^{-a} xi does not settle
    auto bad = fractional_normal_test([](double) { return 1.0; }, 1.0, params);
    CHECK_FALSE(bad.converged);
    auto bad2 = fractional_normal_test(
        [&](double y) { return std::pow(std::max(0.0, 1.0 - y * y), 0.5 * params.alpha); },
        1.0, params);
    CHECK_FALSE(bad2.converged);

    CHECK_THROWS_AS(fractional_normal_test(torsion, 0.5, params), ParameterError);
}

TEST_CASE("solve_concentrated: empty boundary measure leaves the solution alone") {
    auto base = eta_base(96, 0.75, 0.0);
    base.g.eps = 0.5;
    base.g.f = make_field(base.grid, 1.0);
    base = validate_problem(std::move(base));
    RadonMeasure eta;
    eta.support = Support::Boundary;
    auto rep = solve_concentrated(eta, base, {0.2, 0.1});
    auto plain = solve_full(base);
    for (const auto& sol : rep.solutions)
        for (int i = 0; i < sol.u.size(); ++i)
            CHECK(sol.u[i] == doctest::Approx(plain.u[i]).epsilon(1e-13));
}

TEST_CASE("solve_concentrated: linear schedule is Cauchy with bounded norms") {
    auto base = eta_base(512, 0.75, 0.0);
    auto rep = solve_concentrated(boundary_dirac(), base, {0.2, 0.1, 0.05, 0.025});
    REQUIRE(rep.levels.size() == 4);
    // L1 Cauchy differences strictly decreasing
    CHECK(rep.levels[2].cauchy < rep.levels[1].cauchy);
    CHECK(rep.levels[3].cauchy < rep.levels[2].cauchy);
    // W^{1,q} norms bounded along the schedule (q < p*)
    double w11_max = 0.0, w11_min = 1e300;
    for (const auto& lv : rep.levels) {
        w11_max = std::max(w11_max, lv.w11);
        w11_min = std::min(w11_min, lv.w11);
        CHECK(std::isfinite(lv.w1q));
    }
    CHECK(w11_max <= 2.0 * w11_min);
    CHECK_THROWS_AS(solve_concentrated(boundary_dirac(), base, {0.1, 0.2}),
                    ParameterError);
}

TEST_CASE("solve_concentrated: small nonlinear coupling stays Cauchy and nonnegative") {
    auto base = eta_base(256, 0.75, 0.02);
    auto rep = solve_concentrated(boundary_dirac(), base, {0.2, 0.1, 0.05});
    CHECK(rep.levels[2].cauchy < rep.levels[1].cauchy);
    for (int i = 0; i < rep.solutions.back().u.size(); ++i)
        CHECK(rep.solutions.back().u[i] >= -base.solver.tol);
}

TEST_CASE("pairing of scaled lifted densities against boundary-rate functions") {
    auto grid = make_grid(1, 512);
    auto params = make_params(1, 0.75);
    auto battery = make_battery(grid, params, 11);
    auto eta = boundary_dirac(1.0, 1.0);

    for (const auto& xi : battery.calpha) {
        // the pairing converges to the fractional normal limit at the atom
        auto want = fractional_normal_test(xi, 1.0, params);
        REQUIRE(want.converged);
        std::vector<double> pairings;
        for (double t : {0.2, 0.1, 0.05, 0.025}) {
            auto lifted = lift_measure(eta, t, *grid, params);
            GridField d = lifted_density(lifted, grid);
            double pair = 0.0;
            for (int i = 0; i < grid->size(); ++i)
                pair += lifted.scale * d[i] * xi(grid->x(i)) * grid->h;
            pairings.push_back(pair);
        }
        if (want.value != 0.0) {
            CHECK(std::abs(pairings.back() - want.value) / std::abs(want.value) <
                  0.05);
            CHECK(std::abs(pairings[3] - want.value) <
                  std::abs(pairings[0] - want.value));
        }
        // uniform boundedness of the scaled pairings along the schedule
        for (double p : pairings) CHECK(std::abs(p) <= 10.0 * (1.0 + std::abs(want.value)));
    }
}
